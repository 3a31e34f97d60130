//! Periods, borders, Lyndon words, local periods and periodicity complexity.
//!
//! Positions are 1-based and a position `i` of `w` is the cut `(u, v)` with
//! `w = uv` and `|u| = i`; for a finite word the last position `|w|` has an
//! empty right side.

mod lyndon;
pub mod oracle;

pub use lyndon::{is_lyndon, is_primitive, least_conjugate, lyndon_factorization};
pub use oracle::{local_period_oracle, ORACLE_MAX_LEN};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{FiniteWord, Letter, WordSource};
use crate::Rational;

/// `border[k]` is the length of the longest proper border of `w[..k]`.
pub fn border_array<T: PartialEq>(w: &[T]) -> Vec<usize> {
    let mut border = vec![0; w.len() + 1];
    let mut b = 0;
    for k in 1..w.len() {
        while b > 0 && w[k] != w[b] {
            b = border[b];
        }
        if w[k] == w[b] {
            b += 1;
        }
        border[k + 1] = b;
    }
    border
}

/// The least `p` with `w[i] = w[i + p]` wherever both sides are defined.
pub fn period<T: PartialEq>(w: &[T]) -> Result<usize> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok(w.len() - border_array(w)[w.len()])
}

/// The shortest nonempty proper prefix that is also a suffix.
pub fn shortest_border<T: PartialEq>(w: &[T]) -> Result<Option<&[T]>> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let border = border_array(w);
    let mut b = border[w.len()];
    if b == 0 {
        return Ok(None);
    }
    while border[b] > 0 {
        b = border[b];
    }
    Ok(Some(&w[..b]))
}

pub fn is_unbordered<T: PartialEq>(w: &[T]) -> Result<bool> {
    Ok(shortest_border(w)?.is_none())
}

/// Which of the four comparability cases a repetition word falls into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OverlapCase {
    /// `r` is a suffix of `u` and a prefix of `v`.
    Square,
    /// `u` is a proper suffix of `r`, `r` a prefix of `v`.
    RightOverhang,
    /// `r` is a suffix of `u`, `v` a proper prefix of `r`.
    LeftOverhang,
    /// `r` extends past both ends of the word.
    DoubleOverhang,
}

impl OverlapCase {
    fn classify(len: usize, left: usize, right: Option<usize>) -> OverlapCase {
        let past_left = len > left;
        let past_right = right.is_some_and(|r| len > r);
        match (past_left, past_right) {
            (false, false) => OverlapCase::Square,
            (true, false) => OverlapCase::RightOverhang,
            (false, true) => OverlapCase::LeftOverhang,
            (true, true) => OverlapCase::DoubleOverhang,
        }
    }
}

/// The shortest repetition word at a position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepetitionWitness {
    pub length: usize,
    pub case: OverlapCase,
    /// Letters of `r`. The minimal length never exceeds `|w|`, so every
    /// letter is forced by `u` or by `v`.
    pub word: Vec<Letter>,
}

impl RepetitionWitness {
    pub fn render(&self, alphabet: &crate::words::Alphabet) -> String {
        alphabet.render(&self.word)
    }
}

// Every case reduces to agreement of `u` and `v` on their forced overlap:
// w[j] = w[j + len] for max(1, i - len + 1) <= j <= min(i, n - len).
fn admits(w: &[Letter], i: usize, len: usize, bounded_right: bool) -> bool {
    let lo = if len >= i { 1 } else { i - len + 1 };
    let hi = if bounded_right {
        i.min(w.len().saturating_sub(len))
    } else {
        i
    };
    (lo..=hi).rev().all(|j| w[j - 1] == w[j + len - 1])
}

/// `p_w(i)` with a witness, for a finite word.
///
/// Scans `len = 1, 2, ...`; the scan stops at the latest at `p(w)`.
pub fn local_period(w: &[Letter], i: usize) -> Result<RepetitionWitness> {
    let n = w.len();
    if i == 0 || i > n {
        return Err(Error::PositionOutOfRange {
            position: i,
            len: n,
        });
    }
    let right = n - i;
    let len = (1..=n)
        .find(|&len| admits(w, i, len, true))
        .expect("len = |w| always admits");
    let word = (1..=len)
        .map(|k| {
            if k <= right {
                w[i + k - 1]
            } else {
                debug_assert!(k + i > len);
                w[i + k - len - 1]
            }
        })
        .collect();
    Ok(RepetitionWitness {
        length: len,
        case: OverlapCase::classify(len, i, Some(right)),
        word,
    })
}

/// Local period of an infinite word, searched up to `cap`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InfiniteLocalPeriod {
    Found(RepetitionWitness),
    /// No repetition word of length `<= cap`; says nothing about infinity.
    CapExceeded {
        cap: usize,
    },
}

impl InfiniteLocalPeriod {
    pub fn length(&self) -> Option<usize> {
        match self {
            InfiniteLocalPeriod::Found(w) => Some(w.length),
            InfiniteLocalPeriod::CapExceeded { .. } => None,
        }
    }

    pub fn value(&self) -> PeriodValue {
        match self {
            InfiniteLocalPeriod::Found(w) => PeriodValue::Finite(w.length),
            InfiniteLocalPeriod::CapExceeded { .. } => PeriodValue::CapExceeded,
        }
    }
}

/// Local period at position `i` of an infinite word whose first
/// `i + cap` letters are `prefix` (extra letters are ignored).
///
/// Since `v` is infinite, the repetition word is the length-`len` prefix of
/// `v`, and it is either a suffix of `u` (`len <= i`) or has `u` as suffix.
pub fn local_period_in_prefix(prefix: &[Letter], i: usize, cap: usize) -> InfiniteLocalPeriod {
    assert!(i >= 1, "positions are 1-based");
    assert!(
        prefix.len() >= i + cap,
        "need {} letters, have {}",
        i + cap,
        prefix.len()
    );
    match (1..=cap).find(|&len| admits(prefix, i, len, false)) {
        Some(len) => InfiniteLocalPeriod::Found(RepetitionWitness {
            length: len,
            case: OverlapCase::classify(len, i, None),
            word: prefix[i..i + len].to_vec(),
        }),
        None => InfiniteLocalPeriod::CapExceeded { cap },
    }
}

pub fn local_period_infinite(s: &WordSource, i: usize, cap: usize) -> InfiniteLocalPeriod {
    assert!(cap >= 1);
    s.with_prefix(i + cap, |p| local_period_in_prefix(p, i, cap))
}

/// A local period value in a profile.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PeriodValue {
    Finite(usize),
    CapExceeded,
}

impl PeriodValue {
    pub fn finite(self) -> Option<usize> {
        match self {
            PeriodValue::Finite(p) => Some(p),
            PeriodValue::CapExceeded => None,
        }
    }
}

/// Local periods of the first `n` positions and the running averages
/// `h(i) = (p(1) + ... + p(i)) / i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodProfile {
    pub subject: String,
    /// `None` for finite words, where no search bound is needed.
    pub cap: Option<usize>,
    pub local_periods: Vec<PeriodValue>,
    /// `None` from the first cap-exceeded entry on.
    pub h_values: Vec<Option<Rational>>,
}

impl PeriodProfile {
    fn from_values(subject: String, cap: Option<usize>, local_periods: Vec<PeriodValue>) -> Self {
        let mut sum = Some(0u64);
        let h_values = local_periods
            .iter()
            .enumerate()
            .map(|(k, v)| {
                sum = match (sum, v) {
                    (Some(s), PeriodValue::Finite(p)) => Some(s + *p as u64),
                    _ => None,
                };
                sum.map(|s| Rational::new(s, k as u64 + 1))
            })
            .collect();
        PeriodProfile {
            subject,
            cap,
            local_periods,
            h_values,
        }
    }

    pub fn len(&self) -> usize {
        self.local_periods.len()
    }

    pub fn is_empty(&self) -> bool {
        self.local_periods.is_empty()
    }

    /// `h(i)` for 1-based `i`.
    pub fn h(&self, i: usize) -> Option<Rational> {
        self.h_values.get(i.checked_sub(1)?).copied().flatten()
    }

    /// Local period at 1-based `i`.
    pub fn at(&self, i: usize) -> Option<PeriodValue> {
        self.local_periods.get(i.checked_sub(1)?).copied()
    }

    /// Finite local periods, or `None` if any entry exceeded the cap.
    pub fn finite_values(&self) -> Option<Vec<usize>> {
        self.local_periods.iter().map(|v| v.finite()).collect()
    }
}

pub fn profile(w: &FiniteWord) -> PeriodProfile {
    let values = (1..=w.len())
        .map(|i| PeriodValue::Finite(local_period(w.letters(), i).unwrap().length))
        .collect();
    PeriodProfile::from_values(w.to_string(), None, values)
}

/// Profile of the first `n` positions of an infinite word.
pub fn profile_source(s: &WordSource, n: usize, cap: usize) -> PeriodProfile {
    let values = s.with_prefix(n + cap, |p| {
        (1..=n)
            .map(|i| local_period_in_prefix(p, i, cap).value())
            .collect()
    });
    PeriodProfile::from_values(format!("{}[1..={}]", s.descriptor(), n), Some(cap), values)
}

/// `h(w) = h_w(|w|)`.
pub fn h_of(w: &[Letter]) -> Result<Rational> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let sum: u64 = (1..=w.len())
        .map(|i| local_period(w, i).unwrap().length as u64)
        .sum();
    Ok(Rational::new(sum, w.len() as u64))
}

/// All positions whose local period equals the period, ascending.
pub fn critical_positions(w: &[Letter]) -> Result<Vec<usize>> {
    let p = period(w)?;
    Ok((1..=w.len())
        .filter(|&i| local_period(w, i).unwrap().length == p)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Alphabet;

    fn w(s: &str) -> Vec<Letter> {
        Alphabet::binary().parse(s).unwrap()
    }

    fn lps(s: &str) -> Vec<usize> {
        let w = w(s);
        (1..=w.len())
            .map(|i| local_period(&w, i).unwrap().length)
            .collect()
    }

    #[test]
    fn period_examples() {
        assert_eq!(period(&w("abaab")), Ok(3));
        assert_eq!(period(&w("aaaa")), Ok(1));
        assert_eq!(period(&w("ab")), Ok(2));
        assert_eq!(period::<Letter>(&[]), Err(Error::EmptyWord));
    }

    #[test]
    fn border_examples() {
        let ab = Alphabet::binary();
        let render = |b: Option<&[Letter]>| b.map(|b| ab.render(b));
        assert_eq!(
            render(shortest_border(&w("abaab")).unwrap()),
            Some("ab".into())
        );
        assert_eq!(render(shortest_border(&w("aab")).unwrap()), None);
        assert_eq!(render(shortest_border(&w("aa")).unwrap()), Some("a".into()));
        assert_eq!(
            render(shortest_border(&w("abaaba")).unwrap()),
            Some("a".into())
        );
        assert!(is_unbordered(&w("aab")).unwrap());
        assert!(!is_unbordered(&w("abaab")).unwrap());
        assert_eq!(shortest_border::<Letter>(&[]), Err(Error::EmptyWord));
    }

    #[test]
    fn local_period_examples() {
        assert_eq!(lps("abaab"), vec![2, 3, 1, 3, 1]);
        assert_eq!(lps("aaa")[1], 1);
        assert_eq!(lps("ab"), vec![2, 1]);
        assert_eq!(
            local_period(&w("ab"), 3),
            Err(Error::PositionOutOfRange {
                position: 3,
                len: 2
            })
        );
        assert!(local_period(&w("ab"), 0).is_err());
    }

    #[test]
    fn witness_cases() {
        let word = w("abaab");
        let ab = Alphabet::binary();
        // i = 2: u = "ab" is a suffix of r = "aab" = v
        let r = local_period(&word, 2).unwrap();
        assert_eq!(r.case, OverlapCase::RightOverhang);
        assert_eq!(r.render(&ab), "aab");
        // i = 4: u = "abaa", v = "b"; r = "baa" has v as prefix
        let r = local_period(&word, 4).unwrap();
        assert_eq!(r.case, OverlapCase::LeftOverhang);
        assert_eq!(r.render(&ab), "baa");
        let r = local_period(&word, 3).unwrap();
        assert_eq!(r.case, OverlapCase::Square);
        // "ab" at 1: u = "a", v = "b" -> r = "ba"
        let r = local_period(&w("ab"), 1).unwrap();
        assert_eq!(r.case, OverlapCase::DoubleOverhang);
        assert_eq!(r.render(&ab), "ba");
        // "aabb" at 2: u = "aa", v = "bb" share nothing until r = "bbaa"
        let r = local_period(&w("aabb"), 2).unwrap();
        assert_eq!(r.length, 4);
        assert_eq!(r.case, OverlapCase::DoubleOverhang);
        assert_eq!(r.render(&ab), "bbaa");
    }

    #[test]
    fn profile_and_h() {
        let p = profile(&FiniteWord::binary("abaab").unwrap());
        assert_eq!(p.finite_values().unwrap(), vec![2, 3, 1, 3, 1]);
        assert_eq!(p.h(5), Some(Rational::from_integer(2)));
        assert_eq!(h_of(&w("abaab")), Ok(Rational::from_integer(2)));
        assert_eq!(h_of(&w("ab")), Ok(Rational::new(3, 2)));
        assert_eq!(h_of(&w("aaaaaaa")), Ok(Rational::from_integer(1)));
        assert_eq!(h_of(&w("a")), Ok(Rational::from_integer(1)));
        assert_eq!(h_of(&[]), Err(Error::EmptyWord));
        let p = profile(&FiniteWord::binary("aaa").unwrap());
        assert_eq!(p.finite_values().unwrap(), vec![1, 1, 1]);
    }

    #[test]
    fn critical_examples() {
        assert_eq!(critical_positions(&w("abaab")), Ok(vec![2, 4]));
        assert_eq!(critical_positions(&w("ab")), Ok(vec![1]));
        assert_eq!(critical_positions(&w("aaaa")), Ok(vec![1, 2, 3, 4]));
    }

    #[test]
    fn infinite_local_periods() {
        let ab = Alphabet::binary();
        let fib = crate::words::morphic_source(&[('a', "ab"), ('b', "a")], 'a').unwrap();
        assert_eq!(local_period_infinite(&fib, 3, 10).length(), Some(1));
        let nested = crate::words::nested_word(&crate::words::NestedParams::constant(2).unwrap());
        match local_period_infinite(&nested, 1, 10) {
            InfiniteLocalPeriod::Found(r) => {
                assert_eq!(r.length, 3);
                assert_eq!(r.render(&ab), "bba");
                assert_eq!(r.case, OverlapCase::RightOverhang);
            }
            other => panic!("{:?}", other),
        }
        assert_eq!(
            local_period_infinite(&nested, 1, 2),
            InfiniteLocalPeriod::CapExceeded { cap: 2 }
        );
    }

    #[test]
    fn source_profile_marks_cap() {
        let nested = crate::words::nested_word(&crate::words::NestedParams::constant(2).unwrap());
        let p = profile_source(&nested, 6, 3);
        assert_eq!(p.at(1), Some(PeriodValue::Finite(3)));
        assert_eq!(p.h(1), Some(Rational::from_integer(3)));
        // position 5 = d_2 needs 12
        assert_eq!(p.at(5), Some(PeriodValue::CapExceeded));
        assert_eq!(p.h(5), None);
        assert_eq!(p.h(6), None);
        assert!(p.finite_values().is_none());
    }
}
