//! Brute-force local periods straight from the definition of a repetition
//! word. Exists to cross-check [`super::local_period`].

use crate::error::{Error, Result};

/// Longest word the oracle accepts.
pub const ORACLE_MAX_LEN: usize = 16;

fn suffix_comparable<T: PartialEq>(x: &[T], y: &[T]) -> bool {
    let k = x.len().min(y.len());
    x[x.len() - k..] == y[y.len() - k..]
}

fn prefix_comparable<T: PartialEq>(x: &[T], y: &[T]) -> bool {
    let k = x.len().min(y.len());
    x[..k] == y[..k]
}

/// Next word in base-`k` counting order; false after the last one.
fn advance(digits: &mut [usize], k: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < k {
            return true;
        }
        *d = 0;
    }
    false
}

/// Minimum length of a word `r` over `alphabet` that is suffix comparable
/// with `w[..i]` and prefix comparable with `w[i..]`, found by enumerating
/// every candidate of each length in turn.
pub fn local_period_oracle<T: PartialEq + Clone>(
    w: &[T],
    i: usize,
    alphabet: &[T],
) -> Result<usize> {
    if w.len() > ORACLE_MAX_LEN {
        return Err(Error::OracleGuard {
            len: w.len(),
            max: ORACLE_MAX_LEN,
        });
    }
    if i == 0 || i > w.len() {
        return Err(Error::PositionOutOfRange {
            position: i,
            len: w.len(),
        });
    }
    let (u, v) = w.split_at(i);
    for len in 1..=w.len() {
        let mut digits = vec![0usize; len];
        loop {
            let r: Vec<T> = digits.iter().map(|&d| alphabet[d].clone()).collect();
            if suffix_comparable(&r, u) && prefix_comparable(&r, v) {
                return Ok(len);
            }
            if !advance(&mut digits, alphabet.len()) {
                break;
            }
        }
    }
    // Unreachable for nonempty w: w itself (rotated) is a repetition word of length |w|.
    Err(Error::Invariant(format!(
        "no repetition word of length <= {} at position {}",
        w.len(),
        i
    )))
}
