//! Occurrences, return words and the factorizations built from them.
//!
//! Everything here works on a finite prefix (the *horizon*) of an infinite
//! word. Maxima, minima and infima over infinite index sets are therefore
//! windowed: a maximal return time is a lower bound of the true one, an
//! `h` floor is an upper bound of the true infimum.

use std::ops::Range;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::periodicity::{border_array, h_of};
use crate::words::{Alphabet, Letter, RepetitionBound, WordSource};
use crate::Rational;

/// All 0-based offsets `j` with `text[j..j + |z|] == z` (Knuth–Morris–Pratt).
pub fn occurrences<T: PartialEq>(z: &[T], text: &[T]) -> Vec<usize> {
    assert!(!z.is_empty(), "occurrences of the empty word");
    let border = border_array(z);
    let mut found = Vec::new();
    let mut q = 0;
    for (k, c) in text.iter().enumerate() {
        while q > 0 && (q == z.len() || z[q] != *c) {
            q = border[q];
        }
        if z[q] == *c {
            q += 1;
        }
        if q == z.len() {
            found.push(k + 1 - z.len());
        }
    }
    found
}

/// Occurrences of `z` in the first `horizon` letters of `s`.
pub fn occurrences_in(z: &[Letter], s: &WordSource, horizon: usize) -> Vec<usize> {
    s.with_prefix(horizon, |p| occurrences(z, p))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReturnWords {
    /// Distinct return words in lexicographic order.
    pub words: Vec<Vec<Letter>>,
    /// Longest return word seen (a lower bound of the true maximal return time).
    pub max_return_time: usize,
    pub occurrences: usize,
}

/// Return words to `z`: the factors between consecutive occurrences.
pub fn return_words(z: &[Letter], text: &[Letter]) -> Result<ReturnWords> {
    let occ = occurrences(z, text);
    if occ.len() < 2 {
        return Err(Error::InsufficientWindow(format!(
            "{} occurrence(s) of a factor of length {} in {} letters",
            occ.len(),
            z.len(),
            text.len()
        )));
    }
    let mut words: Vec<Vec<Letter>> = occ.windows(2).map(|p| text[p[0]..p[1]].to_vec()).collect();
    let max_return_time = occ.windows(2).map(|p| p[1] - p[0]).max().unwrap();
    words.sort();
    words.dedup();
    Ok(ReturnWords {
        words,
        max_return_time,
        occurrences: occ.len(),
    })
}

/// A maximal exponent found in a window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Exponent {
    pub value: usize,
    /// True when the windowed value meets a known repetition bound of the
    /// word, which makes it exact.
    pub certified: bool,
}

/// Largest `e` with `v^e` occurring in `text`; 0 if `v` does not occur.
pub fn max_exponent(v: &[Letter], text: &[Letter], bound: Option<RepetitionBound>) -> Exponent {
    let occ = occurrences(v, text);
    let mut best = 0;
    let mut k = 0;
    // Runs of occurrences spaced exactly |v| apart.
    while k < occ.len() {
        let mut run = 1;
        let mut next = occ[k] + v.len();
        let mut m = k + 1;
        while m < occ.len() && occ[m] <= next {
            if occ[m] == next {
                run += 1;
                next += v.len();
            }
            m += 1;
        }
        best = best.max(run);
        k += 1;
    }
    Exponent {
        value: best,
        certified: bound.is_some_and(|RepetitionBound(b)| b == best),
    }
}

/// Largest integer exponent of any repetition `v^e` in `text` with
/// `1 <= |v| <= max_period`.
pub fn repetition_exponent_estimate(text: &[Letter], max_period: usize) -> usize {
    let mut best = if text.is_empty() { 0 } else { 1 };
    for p in 1..=max_period.min(text.len()) {
        let mut run = 0;
        for x in 0..text.len() - p {
            if text[x] == text[x + p] {
                run += 1;
                best = best.max((run + p) / p);
            } else {
                run = 0;
            }
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaEntry {
    pub alpha: Vec<Letter>,
    pub exponent: usize,
    pub certified: bool,
    /// Prefix length over which `exponent` was found.
    pub horizon: usize,
}

impl AlphaEntry {
    /// `alpha^exponent`.
    pub fn power(&self) -> Vec<Letter> {
        self.alpha.repeat(self.exponent)
    }
}

/// `α_1` is the least letter; `α_{k+1}` is the lexicographically least
/// return word to `α_k^{e_k}`, where `e_k` is the largest exponent of `α_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaChain {
    pub alphabet: Alphabet,
    pub entries: Vec<AlphaEntry>,
}

impl AlphaChain {
    /// Entry `k` (1-based).
    pub fn get(&self, k: usize) -> Option<&AlphaEntry> {
        self.entries.get(k.checked_sub(1)?)
    }
}

pub fn alpha_chain(
    s: &WordSource,
    depth: usize,
    horizon: usize,
    bound: Option<RepetitionBound>,
) -> Result<AlphaChain> {
    s.with_prefix(horizon, |text| {
        let mut entries: Vec<AlphaEntry> = Vec::with_capacity(depth);
        let mut alpha = vec![s.alphabet().least()];
        for k in 1..=depth {
            let e = max_exponent(&alpha, text, bound);
            if e.value == 0 {
                return Err(Error::InsufficientWindow(format!(
                    "k = {}: alpha does not occur in {} letters",
                    k, horizon
                )));
            }
            let entry = AlphaEntry {
                alpha: alpha.clone(),
                exponent: e.value,
                certified: e.certified,
                horizon,
            };
            if k < depth {
                let returns = return_words(&entry.power(), text)
                    .map_err(|e| Error::InsufficientWindow(format!("k = {}: {}", k, e)))?;
                alpha = returns.words[0].clone();
            }
            entries.push(entry);
        }
        Ok(AlphaChain {
            alphabet: s.alphabet().clone(),
            entries,
        })
    })
}

/// Whether the factor `z` is a power `α_k^{e_k}` from an α-chain; only then
/// are return words guaranteed to start with `z` and occurrences not to
/// overlap, and those properties are asserted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorMode {
    Plain,
    AlphaPower,
}

/// `text = preamble · w_1 · w_2 ⋯` where `preamble · z` is the shortest
/// prefix containing `z` and `w_j` is the `j`-th return word to `z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReturnFactorization {
    pub z: Vec<Letter>,
    pub exponent: Option<usize>,
    pub preamble: Vec<Letter>,
    pub returns: Vec<Vec<Letter>>,
    /// Occurrence offsets of `z`; `offsets[j]` starts `returns[j]`.
    pub offsets: Vec<usize>,
    pub horizon: usize,
    /// Longest return word in the window (`m_k`).
    pub max_return_time: usize,
    /// Shortest return word in the window (`μ_k`).
    pub min_return_len: usize,
}

impl ReturnFactorization {
    /// Indices into `fine.returns` whose concatenation is `self.returns[j]`,
    /// or `None` if the boundaries of `self` are not boundaries of `fine`.
    pub fn constituents(&self, fine: &ReturnFactorization, j: usize) -> Option<Range<usize>> {
        let start = fine.offsets.binary_search(&self.offsets[j]).ok()?;
        let end = fine.offsets.binary_search(&self.offsets[j + 1]).ok()?;
        (start < end).then_some(start..end)
    }
}

pub fn return_factorization(
    text: &[Letter],
    z: &[Letter],
    mode: FactorMode,
) -> Result<ReturnFactorization> {
    let offsets = occurrences(z, text);
    if offsets.len() < 2 {
        return Err(Error::InsufficientWindow(format!(
            "{} occurrence(s) of the factor in {} letters",
            offsets.len(),
            text.len()
        )));
    }
    let returns: Vec<Vec<Letter>> = offsets
        .windows(2)
        .map(|p| text[p[0]..p[1]].to_vec())
        .collect();
    if mode == FactorMode::AlphaPower {
        if let Some(j) = returns.iter().position(|w| !w.starts_with(z)) {
            return Err(Error::Invariant(format!(
                "return word {} does not start with the factor",
                j + 1
            )));
        }
    }
    let lengths = returns.iter().map(|w| w.len());
    Ok(ReturnFactorization {
        z: z.to_vec(),
        exponent: None,
        preamble: text[..offsets[0]].to_vec(),
        max_return_time: lengths.clone().max().unwrap(),
        min_return_len: lengths.min().unwrap(),
        returns,
        offsets,
        horizon: text.len(),
    })
}

/// Factorization by `α_k^{e_k}` for entry `k` of `chain`.
pub fn alpha_factorization(
    text: &[Letter],
    chain: &AlphaChain,
    k: usize,
) -> Result<ReturnFactorization> {
    let entry = chain
        .get(k)
        .ok_or_else(|| Error::InvalidParams(format!("chain has no entry {}", k)))?;
    let mut f = return_factorization(text, &entry.power(), FactorMode::AlphaPower)?;
    f.exponent = Some(entry.exponent);
    Ok(f)
}

/// `min_{1 <= j <= window} h(w_j)`: an upper bound of the true infimum.
pub fn h_floor(fact: &ReturnFactorization, window: usize) -> Result<Rational> {
    if window == 0 {
        return Err(Error::InsufficientWindow("empty window".into()));
    }
    if window > fact.returns.len() {
        return Err(Error::InsufficientWindow(format!(
            "window {} exceeds the {} return words available",
            window,
            fact.returns.len()
        )));
    }
    Ok(fact.returns[..window]
        .iter()
        .map(|w| h_of(w).unwrap())
        .min()
        .unwrap())
}

/// Consecutive blocks `z_{k,0} z_{k,1} ⋯` of length `2^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyadicFactorization {
    pub level: usize,
    pub blocks: Vec<Vec<Letter>>,
    pub horizon: usize,
}

impl DyadicFactorization {
    pub fn block_len(&self) -> usize {
        1 << self.level
    }
}

/// Cuts the first `horizon` letters into complete blocks of length `2^level`.
pub fn dyadic_factorization(text: &[Letter], level: usize) -> Result<DyadicFactorization> {
    let size = 1usize
        .checked_shl(level as u32)
        .filter(|&s| s <= text.len())
        .ok_or_else(|| {
            Error::InsufficientWindow(format!(
                "horizon {} holds no block of length 2^{}",
                text.len(),
                level
            ))
        })?;
    Ok(DyadicFactorization {
        level,
        blocks: text.chunks_exact(size).map(|b| b.to_vec()).collect(),
        horizon: text.len(),
    })
}

/// `min_{1 <= j <= window} h(z_{k,j})`; block 0 is excluded.
pub fn b_floor(dyadic: &DyadicFactorization, window: usize) -> Result<Rational> {
    if window == 0 {
        return Err(Error::InsufficientWindow("empty window".into()));
    }
    if window + 1 > dyadic.blocks.len() {
        return Err(Error::InsufficientWindow(format!(
            "need {} blocks, have {}",
            window + 1,
            dyadic.blocks.len()
        )));
    }
    Ok(dyadic.blocks[1..=window]
        .iter()
        .map(|b| h_of(b).unwrap())
        .min()
        .unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{morphic_source, periodic_source};

    fn ab(s: &str) -> Vec<Letter> {
        Alphabet::binary().parse(s).unwrap()
    }

    fn fib(n: usize) -> Vec<Letter> {
        morphic_source(&[('a', "ab"), ('b', "a")], 'a')
            .unwrap()
            .prefix(n)
    }

    fn tm(n: usize) -> Vec<Letter> {
        morphic_source(&[('a', "ab"), ('b', "ba")], 'a')
            .unwrap()
            .prefix(n)
    }

    fn naive_occurrences(z: &[Letter], text: &[Letter]) -> Vec<usize> {
        (0..=text.len().saturating_sub(z.len()))
            .filter(|&j| j + z.len() <= text.len() && text[j..j + z.len()] == *z)
            .collect()
    }

    #[test]
    fn occurrence_examples() {
        assert_eq!(occurrences(&ab("aa"), &fib(13)), vec![2, 7, 10]);
        assert_eq!(occurrences(&ab("a"), &ab("aaa")), vec![0, 1, 2]);
        assert!(occurrences(&ab("ba"), &ab("aaa")).is_empty());
        let text = tm(200);
        for z in ["abba", "a", "baab", "abbaab", "bb"] {
            assert_eq!(occurrences(&ab(z), &text), naive_occurrences(&ab(z), &text));
        }
    }

    #[test]
    fn return_word_examples() {
        let r = return_words(&ab("aa"), &fib(30)).unwrap();
        assert_eq!(r.words, vec![ab("aab"), ab("aabab")]);
        assert_eq!(r.max_return_time, 5);
        let r = return_words(&ab("a"), &ab("aaaaaa")).unwrap();
        assert_eq!((r.words.clone(), r.max_return_time), (vec![ab("a")], 1));
        let r = return_words(&ab("ab"), &ab("abababab")).unwrap();
        assert_eq!(r.words, vec![ab("ab")]);
        assert!(matches!(
            return_words(&ab("bb"), &ab("abab")),
            Err(Error::InsufficientWindow(_))
        ));
    }

    #[test]
    fn exponent_examples() {
        assert_eq!(max_exponent(&ab("a"), &fib(100), None).value, 2);
        assert_eq!(max_exponent(&ab("a"), &tm(100), None).value, 2);
        assert_eq!(max_exponent(&ab("ab"), &ab("ababababab"), None).value, 5);
        assert_eq!(max_exponent(&ab("bb"), &ab("aaaa"), None).value, 0);
        // Overlapping occurrences must not be counted as a run.
        assert_eq!(max_exponent(&ab("aa"), &ab("aaa"), None).value, 1);
        assert_eq!(max_exponent(&ab("aba"), &ab("abaaba"), None).value, 2);
        let certified = max_exponent(&ab("ab"), &tm(100), Some(RepetitionBound(2)));
        assert!(certified.certified);
        assert!(!max_exponent(&ab("a"), &fib(100), Some(RepetitionBound(3))).certified);
    }

    #[test]
    fn repetition_estimates() {
        assert_eq!(repetition_exponent_estimate(&tm(64), 32), 2);
        assert_eq!(repetition_exponent_estimate(&ab("ababababab"), 2), 5);
        assert_eq!(repetition_exponent_estimate(&fib(100), 50), 3);
    }

    #[test]
    fn fibonacci_alpha_chain() {
        let s = morphic_source(&[('a', "ab"), ('b', "a")], 'a').unwrap();
        let chain = alpha_chain(&s, 2, 1000, None).unwrap();
        assert_eq!(chain.get(1).unwrap().alpha, ab("a"));
        assert_eq!(chain.get(1).unwrap().exponent, 2);
        assert_eq!(chain.get(2).unwrap().alpha, ab("aab"));
        let tm = morphic_source(&[('a', "ab"), ('b', "ba")], 'a').unwrap();
        let chain = alpha_chain(&tm, 1, 1000, Some(RepetitionBound(2))).unwrap();
        assert_eq!(chain.get(1).unwrap().alpha, ab("a"));
        assert_eq!(chain.get(1).unwrap().exponent, 2);
        assert!(chain.get(1).unwrap().certified);
    }

    #[test]
    fn alpha_chain_reports_failing_level() {
        let s = periodic_source(&Alphabet::binary(), "ab").unwrap();
        // (ab)^ω: e_1 = 1, return words to "a" are all "ab"; the windowed
        // exponent of "ab" is the whole window, so it has no second occurrence.
        let err = alpha_chain(&s, 3, 20, None).unwrap_err();
        assert!(
            matches!(err, Error::InsufficientWindow(ref m) if m.starts_with("k = 2")),
            "{}",
            err
        );
    }

    #[test]
    fn fibonacci_return_factorization() {
        let f = return_factorization(&fib(30), &ab("aa"), FactorMode::AlphaPower).unwrap();
        assert_eq!(f.preamble, ab("ab"));
        assert_eq!(&f.returns[..3], &[ab("aabab"), ab("aab"), ab("aabab")]);
        assert_eq!(f.offsets[..3], [2, 7, 10]);
        let mut rebuilt = f.preamble.clone();
        for w in &f.returns {
            rebuilt.extend(w);
        }
        assert_eq!(&rebuilt[..], &fib(30)[..rebuilt.len()]);
    }

    #[test]
    fn periodic_return_factorization() {
        let f = return_factorization(&ab("abababab"), &ab("ab"), FactorMode::Plain).unwrap();
        assert!(f.preamble.is_empty());
        assert!(f.returns.iter().all(|w| *w == ab("ab")));
        assert_eq!(h_floor(&f, 2), Ok(Rational::new(3, 2)));
        let a = return_factorization(&ab("aaaa"), &ab("a"), FactorMode::Plain).unwrap();
        assert_eq!(h_floor(&a, 3), Ok(Rational::from_integer(1)));
        assert!(h_floor(&a, 0).is_err());
        assert!(h_floor(&a, 4).is_err());
    }

    #[test]
    fn plain_mode_allows_non_prefix_returns() {
        let text = ab("abbaabbbabbbabbaabbaabbb");
        let z = ab("ba");
        assert!(return_factorization(&text, &z, FactorMode::Plain).is_ok());
        // Overlapping occurrences give a return word shorter than the factor.
        assert!(matches!(
            return_factorization(&ab("aaa"), &ab("aa"), FactorMode::AlphaPower),
            Err(Error::Invariant(_))
        ));
    }

    #[test]
    fn fibonacci_h_floor_is_min_of_both_returns() {
        let f = return_factorization(&fib(60), &ab("aa"), FactorMode::AlphaPower).unwrap();
        let expected = h_of(&ab("aab")).unwrap().min(h_of(&ab("aabab")).unwrap());
        assert_eq!(h_floor(&f, 5), Ok(expected));
    }

    #[test]
    fn dyadic_examples() {
        let text = tm(16);
        let d = dyadic_factorization(&text, 1).unwrap();
        let rendered: Vec<String> = d
            .blocks
            .iter()
            .map(|b| Alphabet::binary().render(b))
            .collect();
        assert_eq!(rendered, ["ab", "ba", "ba", "ab", "ba", "ab", "ab", "ba"]);
        let d2 = dyadic_factorization(&text, 2).unwrap();
        assert_eq!(
            d2.blocks[0],
            [d.blocks[0].clone(), d.blocks[1].clone()].concat()
        );
        assert_eq!(d2.blocks[0], ab("abba"));
        let d0 = dyadic_factorization(&text, 0).unwrap();
        assert_eq!(b_floor(&d0, 10), Ok(Rational::from_integer(1)));
        assert!(b_floor(&d0, 16).is_err());
        assert!(dyadic_factorization(&text, 5).is_err());
    }

    #[test]
    fn constituents_by_boundary_inclusion() {
        let text = fib(200);
        let fine = return_factorization(&text, &ab("aa"), FactorMode::AlphaPower).unwrap();
        let coarse = return_factorization(&text, &ab("aabaab"), FactorMode::AlphaPower).unwrap();
        for j in 0..coarse.returns.len() {
            let r = coarse.constituents(&fine, j).unwrap();
            assert_eq!(fine.returns[r].concat(), coarse.returns[j]);
        }
        // Shifted boundaries are rejected.
        let other = return_factorization(&text, &ab("b"), FactorMode::Plain).unwrap();
        assert!(coarse.constituents(&other, 0).is_none());
    }
}
