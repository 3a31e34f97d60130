//! Word-family descriptors used by the CLI and config files.
//!
//! ```text
//! fibonacci
//! thue-morse
//! morphic:a=ab,b=a;seed=a
//! holub:n=2,3,4;tail=repeat          (block recursion)
//! holub-formula:n=2,2;tail=step:1    (congruence formula)
//! toeplitz:n=2,2;tail=repeat;stage=3 (Toeplitz stages of the same family)
//! toeplitz:base=abb?;filler=abb?     (T applied to two periodic patterns)
//! periodic:abb
//! ```

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::nested::nested_formula_word;
use super::source::{parse_rules, DEFAULT_HOLE_SCAN};
use super::{
    morphic_source, nested_toeplitz, nested_word, periodic_source, toeplitz_fill, Alphabet,
    NestedParams, Tail, WordSource,
};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Descriptor {
    Fibonacci,
    ThueMorse,
    Morphic {
        rules: Vec<(char, String)>,
        seed: char,
    },
    Nested(NestedParams),
    NestedFormula(NestedParams),
    NestedToeplitz {
        params: NestedParams,
        stage: usize,
    },
    Toeplitz {
        base: String,
        filler: String,
    },
    Periodic(String),
}

/// Largest integer exponent of a repetition in a family, where it is known.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RepetitionBound(pub usize);

impl Descriptor {
    pub fn source(&self) -> Result<WordSource> {
        let ab = Alphabet::binary();
        match self {
            Descriptor::Fibonacci => morphic_source(&[('a', "ab"), ('b', "a")], 'a'),
            Descriptor::ThueMorse => morphic_source(&[('a', "ab"), ('b', "ba")], 'a'),
            Descriptor::Morphic { rules, seed } => {
                let borrowed: Vec<(char, &str)> =
                    rules.iter().map(|(c, s)| (*c, s.as_str())).collect();
                morphic_source(&borrowed, *seed)
            }
            Descriptor::Nested(p) => Ok(nested_word(p)),
            Descriptor::NestedFormula(p) => Ok(nested_formula_word(p)),
            Descriptor::NestedToeplitz { params, stage } => Ok(nested_toeplitz(params, *stage)),
            Descriptor::Toeplitz { base, filler } => {
                let scan = DEFAULT_HOLE_SCAN.max(4 * base.len());
                toeplitz_fill(
                    Arc::new(periodic_source(&ab, base)?),
                    Arc::new(periodic_source(&ab, filler)?),
                    scan,
                )
            }
            Descriptor::Periodic(pattern) => periodic_source(&ab, pattern),
        }
    }

    /// Known repetition bounds: Thue–Morse is overlap-free (no cubes) and
    /// the Fibonacci word has critical exponent `2 + φ < 4`.
    pub fn known_repetition_bound(&self) -> Option<RepetitionBound> {
        match self {
            Descriptor::Fibonacci => Some(RepetitionBound(3)),
            Descriptor::ThueMorse => Some(RepetitionBound(2)),
            _ => None,
        }
    }

    pub fn nested_params(&self) -> Option<&NestedParams> {
        match self {
            Descriptor::Nested(p)
            | Descriptor::NestedFormula(p)
            | Descriptor::NestedToeplitz { params: p, .. } => Some(p),
            _ => None,
        }
    }
}

fn bad(descriptor: &str, reason: impl Into<String>) -> Error {
    Error::BadDescriptor {
        descriptor: descriptor.to_string(),
        reason: reason.into(),
    }
}

fn parse_nested(text: &str, body: &str) -> Result<(NestedParams, Option<usize>)> {
    let mut head = None;
    let mut tail = Tail::Repeat;
    let mut strict = false;
    let mut stage = None;
    for field in body.split(';').filter(|f| !f.is_empty()) {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| bad(text, format!("field {:?} lacks '='", field)))?;
        match key.trim() {
            "n" => {
                let values: std::result::Result<Vec<usize>, _> = value
                    .split(',')
                    .map(|v| v.trim().parse::<usize>())
                    .collect();
                head = Some(values.map_err(|e| bad(text, format!("n: {}", e)))?);
            }
            "tail" => {
                tail = match value.trim() {
                    "repeat" => Tail::Repeat,
                    other => match other.strip_prefix("step:") {
                        Some(step) => Tail::Step(
                            step.parse()
                                .map_err(|e| bad(text, format!("tail step: {}", e)))?,
                        ),
                        None => return Err(bad(text, format!("unknown tail rule {:?}", other))),
                    },
                }
            }
            "strict" => {
                strict = value
                    .trim()
                    .parse()
                    .map_err(|e| bad(text, format!("strict: {}", e)))?
            }
            "stage" => {
                stage = Some(
                    value
                        .trim()
                        .parse()
                        .map_err(|e| bad(text, format!("stage: {}", e)))?,
                )
            }
            other => return Err(bad(text, format!("unknown field {:?}", other))),
        }
    }
    let head = head.ok_or_else(|| bad(text, "missing n=..."))?;
    let params =
        NestedParams::with_strictness(head, tail, strict).map_err(|e| bad(text, e.to_string()))?;
    Ok((params, stage))
}

impl FromStr for Descriptor {
    type Err = Error;

    fn from_str(text: &str) -> Result<Descriptor> {
        let text = text.trim();
        let (kind, body) = text.split_once(':').unwrap_or((text, ""));
        match kind {
            "fibonacci" => Ok(Descriptor::Fibonacci),
            "thue-morse" => Ok(Descriptor::ThueMorse),
            "morphic" => {
                let (rules, seed) = body
                    .split_once(";seed=")
                    .ok_or_else(|| bad(text, "expected morphic:<rules>;seed=<letter>"))?;
                let rules = parse_rules(rules).map_err(|e| bad(text, e))?;
                let mut seed_chars = seed.trim().chars();
                let seed = match (seed_chars.next(), seed_chars.next()) {
                    (Some(c), None) => c,
                    _ => return Err(bad(text, "seed must be one letter")),
                };
                let d = Descriptor::Morphic { rules, seed };
                // Validate prolongability eagerly so errors surface at parse time.
                d.source().map_err(|e| bad(text, e.to_string()))?;
                Ok(d)
            }
            "holub" | "holub-formula" => {
                let (params, stage) = parse_nested(text, body)?;
                if stage.is_some() {
                    return Err(bad(text, "stage= only applies to toeplitz:"));
                }
                Ok(if kind == "holub" {
                    Descriptor::Nested(params)
                } else {
                    Descriptor::NestedFormula(params)
                })
            }
            "toeplitz" if body.starts_with("base=") => {
                let (base, filler) = body
                    .split_once(";filler=")
                    .ok_or_else(|| bad(text, "expected toeplitz:base=<p>;filler=<p>"))?;
                let base = base.trim_start_matches("base=").to_string();
                let d = Descriptor::Toeplitz {
                    base,
                    filler: filler.to_string(),
                };
                d.source().map_err(|e| bad(text, e.to_string()))?;
                Ok(d)
            }
            "toeplitz" => {
                let (params, stage) = parse_nested(text, body)?;
                let stage = stage.ok_or_else(|| bad(text, "missing stage=..."))?;
                Ok(Descriptor::NestedToeplitz { params, stage })
            }
            "periodic" => {
                if body.is_empty() {
                    return Err(bad(text, "empty period"));
                }
                Alphabet::binary()
                    .parse_with_holes(body)
                    .map_err(|e| bad(text, e.to_string()))?;
                Ok(Descriptor::Periodic(body.to_string()))
            }
            other => Err(bad(text, format!("unknown word family {:?}", other))),
        }
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::Fibonacci => write!(f, "fibonacci"),
            Descriptor::ThueMorse => write!(f, "thue-morse"),
            Descriptor::Morphic { rules, seed } => {
                let rules: Vec<String> =
                    rules.iter().map(|(c, s)| format!("{}={}", c, s)).collect();
                write!(f, "morphic:{};seed={}", rules.join(","), seed)
            }
            Descriptor::Nested(p) => write!(f, "holub:{}", p),
            Descriptor::NestedFormula(p) => write!(f, "holub-formula:{}", p),
            Descriptor::NestedToeplitz { params, stage } => {
                write!(f, "toeplitz:{};stage={}", params, stage)
            }
            Descriptor::Toeplitz { base, filler } => {
                write!(f, "toeplitz:base={};filler={}", base, filler)
            }
            Descriptor::Periodic(p) => write!(f, "periodic:{}", p),
        }
    }
}
