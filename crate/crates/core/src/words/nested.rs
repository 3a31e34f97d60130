//! The nested block construction
//!
//! ```text
//! u_0 = ε,   u_i = u_{i-1} a (u_{i-1} b)^{n_i} u_{i-1}
//! ```
//!
//! together with its explicit letter formula and its Toeplitz presentation.
//! With `m_0 = 1` and `m_j = n_j + 2`, every block satisfies
//! `|u_j| + 1 = m_0 m_1 ... m_j`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::source::{periodic_source, toeplitz_fill, LetterGenerator, WordSource};
use super::{Alphabet, Letter};
use crate::error::{Error, Result};

const A: Letter = Letter(0);
const B: Letter = Letter(1);

/// How the sequence `n_j` continues past the explicit head.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tail {
    /// Repeat the last explicit value.
    Repeat,
    /// Keep adding the given step to the last explicit value.
    Step(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NestedParams {
    head: Vec<usize>,
    tail: Tail,
    strict: bool,
}

impl NestedParams {
    /// Nondecreasing sequence starting at `n_1 >= 2`.
    pub fn new(head: Vec<usize>, tail: Tail) -> Result<NestedParams> {
        NestedParams::with_strictness(head, tail, false)
    }

    /// With `strict`, the sequence must be strictly increasing.
    pub fn with_strictness(head: Vec<usize>, tail: Tail, strict: bool) -> Result<NestedParams> {
        let params = NestedParams { head, tail, strict };
        params.validate()?;
        Ok(params)
    }

    /// `n = (value, value, ...)`.
    pub fn constant(value: usize) -> Result<NestedParams> {
        NestedParams::new(vec![value], Tail::Repeat)
    }

    fn validate(&self) -> Result<()> {
        let first = *self
            .head
            .first()
            .ok_or_else(|| Error::InvalidParams("empty n sequence".into()))?;
        if first < 2 {
            return Err(Error::InvalidParams(format!("n_1 = {} < 2", first)));
        }
        for (k, pair) in self.head.windows(2).enumerate() {
            let bad = if self.strict {
                pair[1] <= pair[0]
            } else {
                pair[1] < pair[0]
            };
            if bad {
                return Err(Error::InvalidParams(format!(
                    "n_{} = {} then n_{} = {}: sequence must be {}",
                    k + 1,
                    pair[0],
                    k + 2,
                    pair[1],
                    if self.strict {
                        "strictly increasing"
                    } else {
                        "nondecreasing"
                    }
                )));
            }
        }
        if self.strict && matches!(self.tail, Tail::Repeat | Tail::Step(0)) {
            return Err(Error::InvalidParams(
                "a strictly increasing sequence needs a positive tail step".into(),
            ));
        }
        Ok(())
    }

    pub fn head(&self) -> &[usize] {
        &self.head
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    /// `n_j` for `j >= 1`.
    pub fn n(&self, j: usize) -> usize {
        assert!(j >= 1, "n_j is indexed from 1");
        if j <= self.head.len() {
            return self.head[j - 1];
        }
        let last = *self.head.last().unwrap();
        match self.tail {
            Tail::Repeat => last,
            Tail::Step(step) => last.saturating_add(step.saturating_mul(j - self.head.len())),
        }
    }

    /// `m_0 = 1`, `m_j = n_j + 2`.
    pub fn m(&self, j: usize) -> usize {
        if j == 0 {
            1
        } else {
            self.n(j) + 2
        }
    }

    /// `|u_j| + 1 = m_0 ... m_j` (saturating).
    pub fn block_len(&self, j: usize) -> usize {
        (0..=j).fold(1usize, |acc, i| acc.saturating_mul(self.m(i)))
    }

    /// `|u_j|`.
    pub fn u_len(&self, j: usize) -> usize {
        self.block_len(j) - 1
    }

    /// `d_j = |u_{j-1} a u_{j-2} a ... u_1 a a|` for `j >= 1`.
    pub fn d(&self, j: usize) -> usize {
        assert!(j >= 1);
        (0..j).map(|i| self.block_len(i)).sum()
    }

    /// The local period predicted at `d_j`: `(n_j + 1)(|u_{j-1}| + 1)`.
    pub fn predicted_local_period(&self, j: usize) -> usize {
        (self.n(j) + 1) * self.block_len(j - 1)
    }

    /// `s_j = u_{j-1} a u_{j-2} a ... u_1 a a`, a prefix of the limit word.
    pub fn s_word(&self, j: usize) -> Vec<Letter> {
        assert!(j >= 1);
        let mut s = Vec::with_capacity(self.d(j));
        for i in (0..j).rev() {
            s.extend(nested_block(self, i));
            s.push(A);
        }
        s
    }

    /// Smallest `i` with `|u_i| >= len`.
    pub fn depth_for(&self, len: usize) -> usize {
        let mut i = 0;
        while self.u_len(i) < len {
            i += 1;
        }
        i
    }

    /// Text form used by the `holub:` word descriptor.
    pub fn spec_string(&self) -> String {
        let head = self
            .head
            .iter()
            .map(|n| n.to_string())
            .collect::<Vec<_>>()
            .join(",");
        let tail = match self.tail {
            Tail::Repeat => "repeat".to_string(),
            Tail::Step(s) => format!("step:{}", s),
        };
        let mut out = format!("n={};tail={}", head, tail);
        if self.strict {
            out.push_str(";strict=true");
        }
        out
    }
}

impl fmt::Display for NestedParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec_string())
    }
}

fn next_block(prev: &[Letter], n: usize) -> Vec<Letter> {
    let mut u = Vec::with_capacity((n + 2) * (prev.len() + 1) - 1);
    u.extend_from_slice(prev);
    u.push(A);
    for _ in 0..n {
        u.extend_from_slice(prev);
        u.push(B);
    }
    u.extend_from_slice(prev);
    u
}

/// The finite block `u_i`.
pub fn nested_block(params: &NestedParams, i: usize) -> Vec<Letter> {
    let mut u = Vec::new();
    for j in 1..=i {
        u = next_block(&u, params.n(j));
    }
    u
}

struct Recursion {
    params: NestedParams,
}

impl LetterGenerator for Recursion {
    fn extend(&self, buf: &mut Vec<Letter>, len: usize) {
        let depth = self.params.depth_for(len);
        *buf = nested_block(&self.params, depth);
    }
}

/// The limit word `lim u_i`, built by the block recursion.
pub fn nested_word(params: &NestedParams) -> WordSource {
    WordSource::new(
        format!("holub:{}", params),
        Alphabet::binary(),
        Box::new(Recursion {
            params: params.clone(),
        }),
    )
}

/// Letter `i` (1-based) of the limit word from the congruence formula:
/// it is `a` iff `i ≡ m_0...m_j (mod m_0...m_{j+1})` for some `j >= 0`.
pub fn nested_letter(params: &NestedParams, i: usize) -> Letter {
    assert!(i >= 1, "positions are 1-based");
    let mut product = 1usize; // m_0 ... m_j
    let mut j = 0;
    // Once the product exceeds i the residue i can no longer match.
    while product <= i {
        let modulus = product.saturating_mul(params.m(j + 1));
        if i % modulus == product {
            return A;
        }
        product = modulus;
        j += 1;
    }
    B
}

struct Formula {
    params: NestedParams,
}

impl LetterGenerator for Formula {
    fn extend(&self, buf: &mut Vec<Letter>, len: usize) {
        let start = buf.len() + 1;
        buf.extend((start..=len).map(|i| nested_letter(&self.params, i)));
    }
}

/// The limit word generated letter by letter from the congruence formula.
pub fn nested_formula_word(params: &NestedParams) -> WordSource {
    WordSource::new(
        format!("holub-formula:{}", params),
        Alphabet::binary(),
        Box::new(Formula {
            params: params.clone(),
        }),
    )
}

/// Stage `stage` of the Toeplitz presentation: stage 0 is `?^ω` and stage
/// `i` is `T(stage_{i-1}, (a b^{n_i} ?)^ω)`.
pub fn nested_toeplitz(params: &NestedParams, stage: usize) -> WordSource {
    let ab = Alphabet::binary();
    let mut current = Arc::new(periodic_source(&ab, "?").unwrap());
    for i in 1..=stage {
        let pattern = format!("a{}?", "b".repeat(params.n(i)));
        let filler = Arc::new(periodic_source(&ab, &pattern).unwrap());
        // Stage i-1 has exactly one hole per block of length |u_{i-1}| + 1.
        let scan = params.block_len(i - 1).saturating_mul(2);
        current = Arc::new(
            toeplitz_fill(current, filler, scan).expect("nested Toeplitz stages always have holes"),
        );
    }
    let current = Arc::try_unwrap(current).ok().unwrap();
    WordSource::new(
        format!("toeplitz:{};stage={}", params, stage),
        ab,
        Box::new(Staged { inner: current }),
    )
}

struct Staged {
    inner: WordSource,
}

impl LetterGenerator for Staged {
    fn extend(&self, buf: &mut Vec<Letter>, len: usize) {
        *buf = self.inner.prefix(len);
    }
}

/// Chooses `n_j = max(2 f(d_j) + 1, 2, n_{j-1})` for `j = 1..=depth`, with
/// `d_j` computed from the already fixed `n_1, ..., n_{j-1}`.
///
/// Returns the parameters (tail repeats the last value) and `d_1..d_depth`.
pub fn nested_for_target(
    f: impl Fn(usize) -> usize,
    depth: usize,
) -> Result<(NestedParams, Vec<usize>)> {
    if depth == 0 {
        return Err(Error::InvalidParams("depth must be at least 1".into()));
    }
    let mut head: Vec<usize> = Vec::with_capacity(depth);
    let mut ds = Vec::with_capacity(depth);
    let mut d = 0usize;
    let mut block = 1usize; // |u_{j-1}| + 1
    for j in 1..=depth {
        d = d.saturating_add(block); // d_j = d_{j-1} + |u_{j-1}| + 1
        let floor = head.last().copied().unwrap_or(2).max(2);
        let n = f(d).saturating_mul(2).saturating_add(1).max(floor);
        head.push(n);
        ds.push(d);
        block = block.saturating_mul(n + 2);
        debug_assert!(j == head.len());
    }
    Ok((NestedParams::new(head, Tail::Repeat)?, ds))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn render(letters: &[Letter]) -> String {
        Alphabet::binary().render(letters)
    }

    fn twos() -> NestedParams {
        NestedParams::constant(2).unwrap()
    }

    #[test]
    fn first_blocks() {
        let p = twos();
        assert_eq!(render(&nested_block(&p, 0)), "");
        assert_eq!(render(&nested_block(&p, 1)), "abb");
        assert_eq!(render(&nested_block(&p, 2)), "abbaabbbabbbabb");
        assert_eq!(p.block_len(2), 16);
    }

    #[test]
    fn formula_examples() {
        let p = twos();
        let a_positions: Vec<usize> = (1..=15).filter(|&i| nested_letter(&p, i) == A).collect();
        assert_eq!(a_positions, vec![1, 4, 5, 9, 13]);
        assert_eq!(nested_letter(&p, 2), B);
        for n in 2..6 {
            assert_eq!(nested_letter(&NestedParams::constant(n).unwrap(), 1), A);
        }
    }

    #[test]
    fn toeplitz_stages() {
        let p = twos();
        assert_eq!(nested_toeplitz(&p, 2).render_prefix(15), "abbaabbbabbbabb");
        let three = NestedParams::constant(3).unwrap();
        assert_eq!(nested_toeplitz(&three, 1).render_prefix(5), "abbb?");
        assert_eq!(nested_toeplitz(&p, 0).render_prefix(6), "??????");
    }

    #[test]
    fn target_choice() {
        let (p, ds) = nested_for_target(|_| 1, 2).unwrap();
        assert_eq!(p.n(1), 3);
        assert_eq!(ds, vec![1, 6]);
        let (p, _) = nested_for_target(|d| d, 1).unwrap();
        assert_eq!(p.n(1), 3);
        let (p, ds) = nested_for_target(|d| d, 3).unwrap();
        for (j, &d) in ds.iter().enumerate() {
            assert_eq!(p.d(j + 1), d);
            assert!(p.n(j + 1) > 2 * d);
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(NestedParams::new(vec![1], Tail::Repeat).is_err());
        assert!(NestedParams::new(vec![3, 2], Tail::Repeat).is_err());
        assert!(NestedParams::new(vec![], Tail::Repeat).is_err());
        assert!(NestedParams::new(vec![2, 2, 3], Tail::Repeat).is_ok());
        assert!(NestedParams::with_strictness(vec![2, 2], Tail::Step(1), true).is_err());
        assert!(NestedParams::with_strictness(vec![2, 3], Tail::Repeat, true).is_err());
        assert!(NestedParams::with_strictness(vec![2, 3], Tail::Step(1), true).is_ok());
    }

    #[test]
    fn tail_rules() {
        let p = NestedParams::new(vec![2, 3], Tail::Step(2)).unwrap();
        assert_eq!((p.n(1), p.n(2), p.n(3), p.n(4)), (2, 3, 5, 7));
        let q = NestedParams::new(vec![2, 3], Tail::Repeat).unwrap();
        assert_eq!(q.n(9), 3);
    }

    #[test]
    fn d_and_s() {
        let p = twos();
        assert_eq!(p.d(1), 1);
        assert_eq!(p.d(2), 5);
        assert_eq!(render(&p.s_word(1)), "a");
        assert_eq!(render(&p.s_word(2)), "abbaa");
        assert_eq!(p.s_word(3).len(), p.d(3));
    }
}
