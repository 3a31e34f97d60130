//! Experiment configs and the command-line frontend.
//!
//! Every subcommand builds an [`ExperimentConfig`]; [`run`] executes one,
//! [`batch`] a list of them. Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | all requested checks passed (windowed passes print a warning) |
//! | 1 | error: bad descriptor, bad config, unwritable path, short horizon |
//! | 2 | some check failed |
//! | 3 | no failures, but some check was inconclusive |

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::export;
use crate::factorization::{alpha_chain, alpha_factorization, return_factorization, FactorMode};
use crate::periodicity::{profile, profile_source};
use crate::verify::{self, ExponentSource, Status, VerificationReport, DEFAULT_SEED};
use crate::words::{Descriptor, FiniteWord, NestedParams, WordSource};

/// Cap for infinite-word profiles when none is configured.
pub const DEFAULT_PROFILE_CAP: usize = 8192;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Action {
    Generate,
    Profile,
    Factorize,
    Alpha,
    Verify,
    Report,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
    Text,
}

/// Claim ids accepted by `verify`.
pub const CLAIMS: &[&str] = &[
    "big",
    "big-sharpness",
    "rj",
    "plus",
    "rigidity",
    "letter-formula",
    "toeplitz",
    "return-time",
    "alpha-lemma",
    "lemma-h",
    "lemma-b",
    "oracle",
    "cft",
    "factor",
    "hcka",
    "divergence",
    "block-complexity",
];

/// One experiment. Serialization always writes every field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// A word-family descriptor, or `finite:<letters>` for a finite word.
    pub word: String,
    pub action: Action,
    /// Prefix length for `generate`, `profile`, `letter-formula`, `toeplitz`.
    pub n: usize,
    /// Local period search cap; `None` picks a per-action default.
    pub cap: Option<usize>,
    pub horizon: usize,
    /// α-chain depth, or the factorization level.
    pub k: usize,
    pub k_prime: Option<usize>,
    /// Number of blocks checked; 0 means every block in the horizon.
    pub window: usize,
    /// Depth `J` (or `I`, `i`) for the nested-word claims.
    pub depth: usize,
    pub checkpoints: Vec<usize>,
    pub settle_from: usize,
    pub claims: Vec<String>,
    /// Explicit factor for `factorize`; otherwise `α_k^{e_k}` is used.
    pub factor: Option<String>,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub seed: u64,
    /// Use the known repetition bounds of Fibonacci and Thue–Morse.
    pub certify_bounds: bool,
    pub trials: usize,
    pub maxlen: usize,
    pub alphabet_size: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            word: "fibonacci".into(),
            action: Action::Profile,
            n: 64,
            cap: None,
            horizon: 10_000,
            k: 1,
            k_prime: None,
            window: 0,
            depth: 3,
            checkpoints: Vec::new(),
            settle_from: 0,
            claims: Vec::new(),
            factor: None,
            format: Format::Text,
            output: None,
            seed: DEFAULT_SEED,
            certify_bounds: false,
            trials: 10_000,
            maxlen: 12,
            alphabet_size: 2,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<ExperimentConfig> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

/// Reads either a single config object or an array of them.
pub fn load_configs(path: &Path) -> Result<Vec<ExperimentConfig>> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("{}: {}", path.display(), e)))?;
    let parse = |v: serde_json::Value| {
        serde_json::from_value::<ExperimentConfig>(v)
            .map_err(|e| Error::Config(format!("{}: {}", path.display(), e)))
    };
    match value {
        serde_json::Value::Array(items) => items.into_iter().map(parse).collect(),
        other => Ok(vec![parse(other)?]),
    }
}

enum Subject {
    Finite(FiniteWord),
    Infinite(Descriptor, WordSource),
}

fn subject(word: &str) -> Result<Subject> {
    if let Some(letters) = word.strip_prefix("finite:") {
        let w = FiniteWord::binary(letters).map_err(|e| Error::BadDescriptor {
            descriptor: word.to_string(),
            reason: e.to_string(),
        })?;
        if w.is_empty() {
            return Err(Error::BadDescriptor {
                descriptor: word.to_string(),
                reason: "empty finite word".into(),
            });
        }
        return Ok(Subject::Finite(w));
    }
    let d: Descriptor = word.parse()?;
    let s = d.source()?;
    Ok(Subject::Infinite(d, s))
}

fn infinite(word: &str) -> Result<(Descriptor, WordSource)> {
    match subject(word)? {
        Subject::Infinite(d, s) => Ok((d, s)),
        Subject::Finite(_) => Err(Error::Config(format!(
            "{:?}: this action needs an infinite word",
            word
        ))),
    }
}

fn nested(word: &str) -> Result<NestedParams> {
    let (d, _) = infinite(word)?;
    d.nested_params()
        .cloned()
        .ok_or_else(|| Error::Config(format!("{:?}: this claim needs a holub: descriptor", word)))
}

/// Result of one config: the artifact text and any verification reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub artifact: String,
    pub reports: Vec<VerificationReport>,
}

impl Outcome {
    /// 0, 2 or 3 from the worst report status.
    pub fn exit_code(&self) -> i32 {
        match self.reports.iter().map(|r| r.status).max() {
            Some(Status::Fail) => 2,
            Some(Status::Inconclusive) => 3,
            _ => 0,
        }
    }

    pub fn warnings(&self) -> Vec<String> {
        self.reports
            .iter()
            .filter(|r| r.status == Status::WindowedPass)
            .map(|r| {
                format!(
                    "warning: {} is a windowed pass (checked on a finite prefix only)",
                    r.claim
                )
            })
            .collect()
    }
}

fn json_text(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn generate(config: &ExperimentConfig) -> Result<Outcome> {
    let text = match subject(&config.word)? {
        Subject::Finite(w) => w.to_string(),
        Subject::Infinite(_, s) => s.render_prefix(config.n),
    };
    let artifact = match config.format {
        Format::Text if text.chars().count() <= export::WRAP => format!("{}\n", text),
        Format::Text => export::wrap_with_ruler(&text),
        Format::Json => json_text(&json!({ "word": config.word, "n": text.len(), "prefix": text })),
        Format::Csv => {
            let mut out = String::from("index,letter\n");
            for (k, c) in text.chars().enumerate() {
                writeln!(out, "{},{}", k + 1, c).unwrap();
            }
            out
        }
    };
    Ok(Outcome {
        artifact,
        reports: Vec::new(),
    })
}

fn profile_action(config: &ExperimentConfig) -> Result<Outcome> {
    let p = match subject(&config.word)? {
        Subject::Finite(w) => profile(&w),
        Subject::Infinite(_, s) => {
            profile_source(&s, config.n, config.cap.unwrap_or(DEFAULT_PROFILE_CAP))
        }
    };
    let artifact = match config.format {
        Format::Csv => export::profile_csv(&p)?,
        Format::Json => json_text(&export::profile_json(&p)),
        Format::Text => {
            let mut out = format!("{}\n{:>8} {:>8}  h\n", p.subject, "i", "p(i)");
            for i in 1..=p.len() {
                let lp = p
                    .at(i)
                    .unwrap()
                    .finite()
                    .map_or(export::CAP_MARKER.to_string(), |v| v.to_string());
                let h = p.h(i).map_or("-".to_string(), |h| h.to_string());
                writeln!(out, "{:>8} {:>8}  {}", i, lp, h).unwrap();
            }
            out
        }
    };
    Ok(Outcome {
        artifact,
        reports: Vec::new(),
    })
}

fn bound(config: &ExperimentConfig, d: &Descriptor) -> Option<crate::words::RepetitionBound> {
    config
        .certify_bounds
        .then(|| d.known_repetition_bound())
        .flatten()
}

fn factorize(config: &ExperimentConfig) -> Result<Outcome> {
    let (d, s) = infinite(&config.word)?;
    let text = s.prefix(config.horizon);
    let f = match &config.factor {
        Some(z) => {
            let z = s.alphabet().parse(z)?;
            if z.is_empty() {
                return Err(Error::Config("empty factor".into()));
            }
            return_factorization(&text, &z, FactorMode::Plain)?
        }
        None => {
            let chain = alpha_chain(&s, config.k, config.horizon, bound(config, &d))?;
            alpha_factorization(&text, &chain, config.k)?
        }
    };
    let artifact = match config.format {
        Format::Csv => export::factorization_csv(&f)?,
        Format::Json => json_text(&export::factorization_json(&f, s.alphabet())),
        Format::Text => {
            let ab = s.alphabet();
            let mut out = format!(
                "z = {}  preamble = {}  m_k = {}  mu_k = {}  horizon = {}\n",
                ab.render(&f.z),
                ab.render(&f.preamble),
                f.max_return_time,
                f.min_return_len,
                f.horizon
            );
            for (j, w) in f.returns.iter().enumerate().take(32) {
                writeln!(out, "w_{} = {}", j + 1, ab.render(w)).unwrap();
            }
            if f.returns.len() > 32 {
                writeln!(out, "... {} return words in total", f.returns.len()).unwrap();
            }
            out
        }
    };
    Ok(Outcome {
        artifact,
        reports: Vec::new(),
    })
}

fn alpha_action(config: &ExperimentConfig) -> Result<Outcome> {
    let (d, s) = infinite(&config.word)?;
    let chain = alpha_chain(&s, config.k, config.horizon, bound(config, &d))?;
    let artifact = match config.format {
        Format::Csv => export::alpha_csv(&chain)?,
        Format::Json => json_text(&export::alpha_json(&chain)),
        Format::Text => {
            let mut out = String::new();
            for (k, e) in chain.entries.iter().enumerate() {
                writeln!(
                    out,
                    "alpha_{} = {}  e = {}{}",
                    k + 1,
                    chain.alphabet.render(&e.alpha),
                    e.exponent,
                    if e.certified {
                        " (certified)"
                    } else {
                        " (windowed)"
                    }
                )
                .unwrap();
            }
            out
        }
    };
    Ok(Outcome {
        artifact,
        reports: Vec::new(),
    })
}

fn checkpoints(config: &ExperimentConfig) -> Vec<usize> {
    if config.checkpoints.is_empty() {
        (4..=12).map(|k| 1 << k).collect()
    } else {
        config.checkpoints.clone()
    }
}

fn claim(config: &ExperimentConfig, id: &str) -> Result<Vec<VerificationReport>> {
    let c = config;
    let one = |r| Ok(vec![r]);
    match id {
        "big" => one(verify::check_big(&nested(&c.word)?, c.depth, c.cap)),
        "big-sharpness" => one(verify::check_big_sharpness(&nested(&c.word)?, c.depth)),
        "rj" => {
            let p = nested(&c.word)?;
            Ok((0..c.depth).map(|j| verify::check_rj(&p, j)).collect())
        }
        "plus" => one(verify::check_plus(&nested(&c.word)?, c.depth)),
        "rigidity" => one(verify::check_occurrence_rigidity(
            &nested(&c.word)?,
            c.depth,
            c.horizon,
        )),
        "letter-formula" => one(verify::check_letter_formula(&nested(&c.word)?, c.n)),
        "toeplitz" => one(verify::check_toeplitz(&nested(&c.word)?, c.n)),
        "return-time" => one(verify::check_return_time_bound(
            &nested(&c.word)?,
            c.depth,
            c.horizon,
            None,
        )),
        "alpha-lemma" => {
            let (d, s) = infinite(&c.word)?;
            one(verify::check_alpha_lemma(&s, c.k, c.horizon, bound(c, &d)))
        }
        "lemma-h" => {
            let (d, s) = infinite(&c.word)?;
            one(verify::check_lemma_h_alpha(
                &s,
                c.k,
                c.k_prime,
                c.horizon,
                c.window,
                bound(c, &d),
            ))
        }
        "lemma-b" => {
            let (d, s) = infinite(&c.word)?;
            let exponent = match bound(c, &d) {
                Some(b) => ExponentSource::Certified(b.0),
                None => ExponentSource::Windowed,
            };
            let k_prime = c
                .k_prime
                .ok_or_else(|| Error::Config("lemma-b needs k_prime".into()))?;
            let window = if c.window == 0 {
                (c.horizon >> k_prime).saturating_sub(1).max(1)
            } else {
                c.window
            };
            one(verify::check_lemma_b_step(
                &s, c.k, k_prime, window, exponent,
            ))
        }
        "oracle" => one(verify::check_oracle_equivalence(c.alphabet_size, c.maxlen)),
        "cft" => one(verify::check_cft_exhaustive(c.alphabet_size, c.maxlen)),
        "factor" => one(verify::check_factor_monotonicity(c.trials, c.seed)),
        "hcka" => one(verify::check_h_superadditivity(c.trials, c.seed)),
        "divergence" => {
            let (_, s) = infinite(&c.word)?;
            one(verify::divergence_report(
                &s,
                &checkpoints(c),
                c.cap.unwrap_or(DEFAULT_PROFILE_CAP),
                c.settle_from,
            )
            .report)
        }
        "block-complexity" => one(verify::check_block_position_complexity(
            &nested(&c.word)?,
            c.depth,
            c.cap,
        )),
        other => Err(Error::Config(format!(
            "unknown claim {:?}; known claims: {}",
            other,
            CLAIMS.join(", ")
        ))),
    }
}

fn reports_artifact(reports: &[VerificationReport], format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => json_text(&reports),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::Io {
                path: "<csv>".into(),
                message: e.to_string(),
            };
            w.write_record(["claim", "status", "instances", "failures", "parameters"])
                .map_err(io)?;
            for r in reports {
                let params: Vec<String> = r
                    .parameters
                    .iter()
                    .map(|(k, v)| format!("{}={}", k, v))
                    .collect();
                w.write_record([
                    r.claim.clone(),
                    r.status.to_string(),
                    r.instances.to_string(),
                    r.failures.to_string(),
                    params.join(";"),
                ])
                .map_err(io)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| Error::Io {
                path: "<csv>".into(),
                message: e.to_string(),
            })?)
            .unwrap()
        }
        Format::Text => {
            let mut out = format!(
                "{:<18} {:<14} {:>10} {:>9}\n",
                "claim", "status", "instances", "failures"
            );
            for r in reports {
                writeln!(
                    out,
                    "{:<18} {:<14} {:>10} {:>9}",
                    r.claim,
                    r.status.to_string(),
                    r.instances,
                    r.failures
                )
                .unwrap();
                if let Some(cx) = &r.counterexample {
                    let word: String = cx.word.chars().take(64).collect();
                    let more = if cx.word.chars().count() > 64 {
                        "..."
                    } else {
                        ""
                    };
                    writeln!(
                        out,
                        "  counterexample: word={}{} position={} expected={} actual={}",
                        word,
                        more,
                        cx.position.map_or("-".to_string(), |p| p.to_string()),
                        cx.expected,
                        cx.actual
                    )
                    .unwrap();
                }
                for note in &r.notes {
                    writeln!(out, "  note: {}", note).unwrap();
                }
            }
            out
        }
    })
}

fn verify_action(config: &ExperimentConfig) -> Result<Outcome> {
    if config.claims.is_empty() {
        return Err(Error::Config("verify needs at least one claim".into()));
    }
    let mut reports = Vec::new();
    for id in &config.claims {
        reports.extend(claim(config, id)?);
    }
    Ok(Outcome {
        artifact: reports_artifact(&reports, config.format)?,
        reports,
    })
}

fn report_action(config: &ExperimentConfig) -> Result<Outcome> {
    let (_, s) = infinite(&config.word)?;
    let d = verify::divergence_report(
        &s,
        &checkpoints(config),
        config.cap.unwrap_or(DEFAULT_PROFILE_CAP),
        config.settle_from,
    );
    let artifact = match config.format {
        Format::Json => json_text(&json!({
            "rows": d.rows.iter().map(|r| json!({
                "i": r.i,
                "local_period": r.local_period,
                "h": r.h.map(|h| json!({ "numerator": h.numer(), "denominator": h.denom() })),
            })).collect::<Vec<_>>(),
            "report": d.report,
        })),
        Format::Csv => {
            let mut out =
                String::from("i,local_period,h_numerator,h_denominator,h_decimal_approx\n");
            for r in &d.rows {
                let lp = r
                    .local_period
                    .map_or(export::CAP_MARKER.to_string(), |p| p.to_string());
                match r.h {
                    Some(h) => writeln!(
                        out,
                        "{},{},{},{},{:.6}",
                        r.i,
                        lp,
                        h.numer(),
                        h.denom(),
                        *h.numer() as f64 / *h.denom() as f64
                    ),
                    None => writeln!(out, "{},{},,,", r.i, lp),
                }
                .unwrap();
            }
            out
        }
        Format::Text => {
            let mut out = format!("{} (empirical trend only)\n", s.descriptor());
            for r in &d.rows {
                writeln!(
                    out,
                    "{:>8}  {}",
                    r.i,
                    r.h.map_or("cap exceeded".to_string(), |h| h.to_string())
                )
                .unwrap();
            }
            writeln!(out, "status: {}", d.report.status).unwrap();
            out
        }
    };
    Ok(Outcome {
        artifact,
        reports: vec![d.report],
    })
}

/// Computes the artifact of one config without writing anything.
pub fn execute(config: &ExperimentConfig) -> Result<Outcome> {
    match config.action {
        Action::Generate => generate(config),
        Action::Profile => profile_action(config),
        Action::Factorize => factorize(config),
        Action::Alpha => alpha_action(config),
        Action::Verify => verify_action(config),
        Action::Report => report_action(config),
    }
}

/// Writes `contents` to a temporary sibling of `path`, then renames it.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let io = |e: std::io::Error| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    let name = path
        .file_name()
        .ok_or_else(|| Error::Io {
            path: path.display().to_string(),
            message: "not a file path".into(),
        })?
        .to_string_lossy();
    let tmp = path.with_file_name(format!(".{}.tmp", name));
    fs::write(&tmp, contents).map_err(io)?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io(e)
    })
}

/// One-line diagnostic naming the kind of error.
pub fn diagnostic(e: &Error) -> String {
    let kind = match e {
        Error::BadDescriptor { .. }
        | Error::InvalidAlphabet(_)
        | Error::UnknownSymbol { .. }
        | Error::NotProlongable(_) => "bad descriptor",
        Error::Io { .. } => "unwritable path",
        Error::InsufficientWindow(_) => "insufficient horizon",
        Error::Config(_) | Error::InvalidParams(_) => "bad config",
        _ => "error",
    };
    format!("error ({}): {}", kind, e)
}

/// Runs one config: writes the artifact to `config.output` (or `out`),
/// warnings and diagnostics to `err`, and returns the exit code.
pub fn run(config: &ExperimentConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let outcome = match execute(config) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "{}", diagnostic(&e));
            return 1;
        }
    };
    match &config.output {
        Some(path) => {
            if let Err(e) = write_atomic(path, &outcome.artifact) {
                let _ = writeln!(err, "{}", diagnostic(&e));
                return 1;
            }
        }
        None => {
            let _ = out.write_all(outcome.artifact.as_bytes());
        }
    }
    for w in outcome.warnings() {
        let _ = writeln!(err, "{}", w);
    }
    outcome.exit_code()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BatchRow {
    pub index: usize,
    pub word: String,
    pub action: Action,
    pub exit_code: i32,
    /// Worst report status, or the diagnostic for an error.
    pub summary: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BatchSummary {
    pub rows: Vec<BatchRow>,
}

impl BatchSummary {
    /// 2 if anything failed, else 1 on errors, else 3 on inconclusive
    /// entries, else 0.
    pub fn exit_code(&self) -> i32 {
        let codes: Vec<i32> = self.rows.iter().map(|r| r.exit_code).collect();
        [2, 1, 3]
            .into_iter()
            .find(|c| codes.contains(c))
            .unwrap_or(0)
    }

    pub fn render(&self) -> String {
        let mut out = format!(
            "{:>4}  {:<9} {:>4}  {:<40} {}\n",
            "#", "action", "exit", "word", "summary"
        );
        for r in &self.rows {
            writeln!(
                out,
                "{:>4}  {:<9} {:>4}  {:<40} {}",
                r.index,
                serde_json::to_value(r.action).unwrap().as_str().unwrap(),
                r.exit_code,
                r.word,
                r.summary
            )
            .unwrap();
        }
        out
    }
}

fn batch_entry(index: usize, config: &ExperimentConfig) -> BatchRow {
    let (exit_code, summary) = match execute(config) {
        Err(e) => (1, diagnostic(&e)),
        Ok(outcome) => {
            let written = match &config.output {
                Some(path) => write_atomic(path, &outcome.artifact),
                None => Ok(()),
            };
            match written {
                Err(e) => (1, diagnostic(&e)),
                Ok(()) => {
                    let summary = outcome
                        .reports
                        .iter()
                        .map(|r| format!("{}={}", r.claim, r.status))
                        .collect::<Vec<_>>()
                        .join(" ");
                    let summary = if summary.is_empty() {
                        "ok".to_string()
                    } else {
                        summary
                    };
                    (outcome.exit_code(), summary)
                }
            }
        }
    };
    BatchRow {
        index,
        word: config.word.clone(),
        action: config.action,
        exit_code,
        summary,
    }
}

/// Runs every config in parallel; rows come back in input order and one
/// entry's error never stops the others.
pub fn batch(configs: &[ExperimentConfig]) -> BatchSummary {
    let rows = std::thread::scope(|scope| {
        let handles: Vec<_> = configs
            .iter()
            .enumerate()
            .map(|(k, c)| scope.spawn(move || batch_entry(k + 1, c)))
            .collect();
        handles
            .into_iter()
            .enumerate()
            .map(|(k, h)| {
                h.join().unwrap_or_else(|_| BatchRow {
                    index: k + 1,
                    word: configs[k].word.clone(),
                    action: configs[k].action,
                    exit_code: 1,
                    summary: "error: entry panicked".into(),
                })
            })
            .collect()
    });
    BatchSummary { rows }
}

#[derive(Debug, Parser)]
#[command(
    name = "wordperiod",
    version,
    about = "Local periods and periodicity complexity of words"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print a prefix of a word.
    Generate(ConfigArgs),
    /// Local periods and h values of a prefix.
    Profile(ConfigArgs),
    /// Return-word factorization by a factor or by alpha_k^e_k.
    Factorize(ConfigArgs),
    /// The chain of lexicographically least return words.
    Alpha(ConfigArgs),
    /// Run one or more claim checkers.
    Verify(ConfigArgs),
    /// Exact h values at checkpoints (empirical trend).
    Report(ConfigArgs),
    /// Run a JSON file holding an array of configs.
    Batch {
        file: PathBuf,
        /// Write the summary table here instead of stdout.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct ConfigArgs {
    /// Start from this JSON config; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Print the effective config as JSON and exit.
    #[arg(long)]
    print_config: bool,
    #[arg(long)]
    word: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    cap: Option<usize>,
    #[arg(long)]
    horizon: Option<usize>,
    #[arg(long, short = 'K')]
    k: Option<usize>,
    #[arg(long)]
    k_prime: Option<usize>,
    #[arg(long)]
    window: Option<usize>,
    /// Depth for the nested-word claims.
    #[arg(long = "J", alias = "depth")]
    depth: Option<usize>,
    /// Comma-separated positions.
    #[arg(long, value_delimiter = ',')]
    checkpoints: Option<Vec<usize>>,
    #[arg(long)]
    settle_from: Option<usize>,
    #[arg(long = "claim")]
    claims: Vec<String>,
    #[arg(long)]
    factor: Option<String>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    certify_bounds: bool,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    maxlen: Option<usize>,
    #[arg(long)]
    alphabet_size: Option<usize>,
}

impl ConfigArgs {
    fn into_config(self, action: Action) -> Result<ExperimentConfig> {
        let mut c = match &self.config {
            Some(path) => {
                let mut all = load_configs(path)?;
                if all.len() != 1 {
                    return Err(Error::Config(format!(
                        "{}: expected one config, found {}",
                        path.display(),
                        all.len()
                    )));
                }
                all.pop().unwrap()
            }
            None => ExperimentConfig::default(),
        };
        c.action = action;
        macro_rules! set {
            ($($field:ident),*) => { $(if let Some(v) = self.$field { c.$field = v; })* };
        }
        set!(
            word,
            n,
            horizon,
            k,
            window,
            depth,
            checkpoints,
            settle_from,
            format,
            seed,
            trials,
            maxlen,
            alphabet_size
        );
        if self.cap.is_some() {
            c.cap = self.cap;
        }
        if self.k_prime.is_some() {
            c.k_prime = self.k_prime;
        }
        if self.factor.is_some() {
            c.factor = self.factor;
        }
        if self.output.is_some() {
            c.output = self.output;
        }
        if !self.claims.is_empty() {
            c.claims = self.claims;
        }
        if self.certify_bounds {
            c.certify_bounds = true;
        }
        Ok(c)
    }
}

/// Entry point shared by the binary and the tests.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let (action, args) = match cli.command {
        Command::Batch { file, summary } => {
            let configs = match load_configs(&file) {
                Ok(c) => c,
                Err(e) => {
                    let _ = writeln!(err, "{}", diagnostic(&e));
                    return 1;
                }
            };
            let result = batch(&configs);
            let table = result.render();
            match summary {
                Some(path) => {
                    if let Err(e) = write_atomic(&path, &table) {
                        let _ = writeln!(err, "{}", diagnostic(&e));
                        return 1;
                    }
                }
                None => {
                    let _ = out.write_all(table.as_bytes());
                }
            }
            return result.exit_code();
        }
        Command::Generate(a) => (Action::Generate, a),
        Command::Profile(a) => (Action::Profile, a),
        Command::Factorize(a) => (Action::Factorize, a),
        Command::Alpha(a) => (Action::Alpha, a),
        Command::Verify(a) => (Action::Verify, a),
        Command::Report(a) => (Action::Report, a),
    };
    let print = args.print_config;
    let config = match args.into_config(action) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "{}", diagnostic(&e));
            return 1;
        }
    };
    if print {
        let _ = writeln!(out, "{}", config.to_json());
        return 0;
    }
    run(&config, out, err)
}
