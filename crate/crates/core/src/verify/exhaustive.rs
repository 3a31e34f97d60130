//! Exhaustive and randomized checks over short words.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{cx, ReportBuilder, VerificationReport};
use crate::periodicity::{
    critical_positions, h_of, local_period, local_period_oracle, period, ORACLE_MAX_LEN,
};
use crate::words::{Alphabet, Letter};

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

const RANDOM_MAX_LEN: usize = 14;
const CFT_MAX_LEN: usize = 12;
const CFT_MAX_ALPHABET: usize = 3;

fn letters(size: usize) -> Vec<Letter> {
    (0..size as u8).map(Letter::from_rank).collect()
}

fn alphabet_of(size: usize) -> Alphabet {
    Alphabet::new(&"abcdefghijklmnopqrstuvwxyz"[..size]).unwrap()
}

/// Calls `f` on every word of length `1..=max_len` over `size` letters.
fn for_all_words(size: usize, max_len: usize, mut f: impl FnMut(&[Letter])) {
    let sigma = letters(size);
    for len in 1..=max_len {
        let mut digits = vec![0usize; len];
        let mut word = vec![sigma[0]; len];
        'words: loop {
            f(&word);
            for k in (0..len).rev() {
                digits[k] += 1;
                if digits[k] < size {
                    word[k] = sigma[digits[k]];
                    continue 'words;
                }
                digits[k] = 0;
                word[k] = sigma[0];
            }
            break;
        }
    }
}

fn guard(
    report: &mut ReportBuilder,
    size: usize,
    max_len: usize,
    max_size: usize,
    limit: usize,
) -> bool {
    if !(2..=max_size).contains(&size) || max_len > limit {
        report.inconclusive(format!(
            "refusing alphabet size {} and length {}: limits are 2..={} letters, length {}",
            size, max_len, max_size, limit
        ));
        return false;
    }
    true
}

/// The scanning local period agrees with the brute-force oracle at every
/// position of every word up to `max_len`, and never exceeds the period.
pub fn check_oracle_equivalence(alphabet_size: usize, max_len: usize) -> VerificationReport {
    let mut report = ReportBuilder::new("oracle-equivalence")
        .param("alphabet", alphabet_size)
        .param("maxlen", max_len);
    if !guard(
        &mut report,
        alphabet_size,
        max_len,
        CFT_MAX_ALPHABET,
        ORACLE_MAX_LEN,
    ) {
        return report.finish();
    }
    let alphabet = alphabet_of(alphabet_size);
    let sigma = letters(alphabet_size);
    for_all_words(alphabet_size, max_len, |w| {
        let p = period(w).unwrap();
        for i in 1..=w.len() {
            let fast = local_period(w, i).unwrap().length;
            let slow = local_period_oracle(w, i, &sigma).unwrap();
            report.check(fast == slow && fast <= p, || {
                cx(alphabet.render(w), Some(i), slow, fast)
            });
        }
    });
    report.finish()
}

/// Every word up to `max_len` has a critical position, and its largest
/// local period equals its period.
pub fn check_cft_exhaustive(alphabet_size: usize, max_len: usize) -> VerificationReport {
    let mut report = ReportBuilder::new("cft")
        .param("alphabet", alphabet_size)
        .param("maxlen", max_len);
    if !guard(
        &mut report,
        alphabet_size,
        max_len,
        CFT_MAX_ALPHABET,
        CFT_MAX_LEN,
    ) {
        return report.finish();
    }
    let alphabet = alphabet_of(alphabet_size);
    for_all_words(alphabet_size, max_len, |w| {
        let p = period(w).unwrap();
        let top = (1..=w.len())
            .map(|i| local_period(w, i).unwrap().length)
            .max()
            .unwrap();
        let critical = critical_positions(w).unwrap();
        report.check(!critical.is_empty() && top == p, || {
            cx(alphabet.render(w), None, p, top)
        });
    });
    report.finish()
}

fn random_word(rng: &mut ChaCha8Rng, len: usize) -> Vec<Letter> {
    (0..len)
        .map(|_| Letter::from_rank(rng.gen_range(0..2)))
        .collect()
}

/// `p_v(i) <= p_{uvz}(|u| + i)` for random `w = uvz` with `v` nonempty.
pub fn check_factor_monotonicity(trials: usize, seed: u64) -> VerificationReport {
    let mut report = ReportBuilder::new("factor")
        .param("trials", trials)
        .param("seed", seed);
    let alphabet = Alphabet::binary();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let len = rng.gen_range(1..=RANDOM_MAX_LEN);
        let w = random_word(&mut rng, len);
        let start = rng.gen_range(0..len);
        let end = rng.gen_range(start + 1..=len);
        let v = &w[start..end];
        let bad = (1..=v.len()).find(|&i| {
            local_period(v, i).unwrap().length > local_period(&w, start + i).unwrap().length
        });
        report.check(bad.is_none(), || {
            let i = bad.unwrap();
            cx(
                format!(
                    "{}|{}|{}",
                    alphabet.render(&w[..start]),
                    alphabet.render(v),
                    alphabet.render(&w[end..])
                ),
                Some(i),
                format!("<= {}", local_period(&w, start + i).unwrap().length),
                local_period(v, i).unwrap().length,
            )
        });
    }
    report.finish()
}

/// `h(uv) >= (|u| h(u) + |v| h(v)) / |uv|` for random nonempty `u`, `v`.
pub fn check_h_superadditivity(trials: usize, seed: u64) -> VerificationReport {
    let mut report = ReportBuilder::new("hcka")
        .param("trials", trials)
        .param("seed", seed);
    let alphabet = Alphabet::binary();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let len = rng.gen_range(2..=RANDOM_MAX_LEN);
        let w = random_word(&mut rng, len);
        let cut = rng.gen_range(1..len);
        let (u, v) = w.split_at(cut);
        let whole = h_of(&w).unwrap();
        let weighted = (h_of(u).unwrap() * crate::Rational::from(u.len() as u64)
            + h_of(v).unwrap() * crate::Rational::from(v.len() as u64))
            / crate::Rational::from(len as u64);
        report.check(whole >= weighted, || {
            cx(
                format!("{}|{}", alphabet.render(u), alphabet.render(v)),
                Some(cut),
                format!(">= {}", weighted),
                whole,
            )
        });
    }
    report.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::Status;

    #[test]
    fn enumerates_every_word_once() {
        let mut seen = std::collections::BTreeSet::new();
        for_all_words(3, 3, |w| {
            assert!(seen.insert(w.to_vec()));
        });
        assert_eq!(seen.len(), 3 + 9 + 27);
    }

    #[test]
    fn small_exhaustive_runs() {
        assert_eq!(check_oracle_equivalence(2, 8).status, Status::Pass);
        assert_eq!(check_oracle_equivalence(3, 5).status, Status::Pass);
        let r = check_cft_exhaustive(2, 10);
        assert_eq!(r.status, Status::Pass);
        assert_eq!(r.instances, (1..=10).map(|n| 1 << n).sum::<usize>());
    }

    #[test]
    fn guards() {
        assert_eq!(check_cft_exhaustive(4, 5).status, Status::Inconclusive);
        assert_eq!(check_cft_exhaustive(2, 13).status, Status::Inconclusive);
        assert_eq!(check_oracle_equivalence(2, 17).status, Status::Inconclusive);
    }

    #[test]
    fn random_inequalities() {
        assert_eq!(
            check_factor_monotonicity(500, DEFAULT_SEED).status,
            Status::Pass
        );
        assert_eq!(check_h_superadditivity(500, 7).status, Status::Pass);
    }

    #[test]
    fn seed_is_reported() {
        let r = check_h_superadditivity(1, 99);
        assert_eq!(r.parameters["seed"], "99");
    }
}
