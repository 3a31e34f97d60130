//! Per-instance versions of the α-chain lemma and of the two inequality
//! chains behind the unboundedness of `h_k` and `b_k`.

use serde::{Deserialize, Serialize};

use super::{cx, ReportBuilder, VerificationReport};
use crate::factorization::{
    alpha_chain, alpha_factorization, dyadic_factorization, repetition_exponent_estimate,
    return_words, ReturnFactorization,
};
use crate::periodicity::{critical_positions, h_of, is_lyndon, is_unbordered, period};
use crate::words::{Letter, RepetitionBound, WordSource};
use crate::Rational;

fn rat(n: usize, d: usize) -> Rational {
    Rational::new(n as u64, d as u64)
}

/// For `k = 1..=depth` within the first `horizon` letters: `α_k` is the
/// least factor of its length, `α_{k-1}^{e_{k-1}}` is a prefix of `α_k`,
/// and every return word to `α_k^{e_k}` starts with it and is Lyndon and
/// unbordered.
pub fn check_alpha_lemma(
    s: &WordSource,
    depth: usize,
    horizon: usize,
    bound: Option<RepetitionBound>,
) -> VerificationReport {
    let mut report = ReportBuilder::new("alpha-lemma")
        .param("word", s.descriptor())
        .param("K", depth)
        .param("horizon", horizon);
    report.windowed();
    let chain = match alpha_chain(s, depth, horizon, bound) {
        Ok(chain) => chain,
        Err(e) => {
            report.inconclusive(e.to_string());
            return report.finish();
        }
    };
    let alphabet = s.alphabet().clone();
    let render = |w: &[Letter]| alphabet.render(w);
    s.with_prefix(horizon, |text| {
        for (idx, entry) in chain.entries.iter().enumerate() {
            let k = idx + 1;
            let alpha = &entry.alpha;
            let least = text.windows(alpha.len()).min().unwrap();
            report.check(least == &alpha[..], || {
                cx(render(alpha), None, render(least), render(alpha))
            });
            if k > 1 {
                let prev = chain.entries[idx - 1].power();
                report.check(alpha.starts_with(&prev), || {
                    cx(
                        render(alpha),
                        None,
                        format!("prefix {}", render(&prev)),
                        "no",
                    )
                });
            }
            let power = entry.power();
            let returns = match return_words(&power, text) {
                Ok(r) => r,
                Err(e) => {
                    report.inconclusive(format!("k = {}: {}", k, e));
                    continue;
                }
            };
            for w in &returns.words {
                report.check(w.starts_with(&power), || {
                    cx(render(w), None, format!("prefix {}", render(&power)), "no")
                });
                report.check(is_lyndon(w).unwrap(), || {
                    cx(render(w), None, "Lyndon", "not Lyndon")
                });
                report.check(is_unbordered(w).unwrap(), || {
                    cx(render(w), None, "unbordered", "bordered")
                });
            }
            let shown = if alpha.len() <= 32 {
                render(alpha)
            } else {
                format!("<{} letters>", alpha.len())
            };
            report.note(format!(
                "k={}: alpha={} e={}{} returns={:?}",
                k,
                shown,
                entry.exponent,
                if entry.certified { "" } else { " (windowed)" },
                returns.words.iter().map(|w| w.len()).collect::<Vec<_>>()
            ));
        }
    });
    report.finish()
}

/// The inequality chain for one refinement step.
///
/// `fine` is the level-`k` factorization, `coarse` the level-`k'` one, both
/// over the same text. For each coarse block `w = w_{k',j}`, `j = 1..=window`,
/// with constituents `w_{k,s} ... w_{k,s+t}` and `w_{k,ℓ}` the constituent
/// holding the smallest critical position of `w`, asserts
///
/// ```text
/// h(w) >= (Σ |w_{k,i}| h(w_{k,i}) + |w| - |w_{k,ℓ}|) / |w|
///      >= min_i h(w_{k,i}) + 1 - |w_{k,ℓ}| / |w|
/// ```
///
/// and, when the windowed `μ_{k'} > 2 m_k` holds, that the last term is at
/// least `min_i h(w_{k,i}) + 1/2`.
pub fn check_lemma_h_step(
    fine: &ReturnFactorization,
    coarse: &ReturnFactorization,
    window: usize,
) -> VerificationReport {
    let m_k = fine.max_return_time;
    let mu = coarse.min_return_len;
    let mut report = ReportBuilder::new("lemma-h")
        .param("window", window)
        .param("m_k", m_k)
        .param("mu_k'", mu);
    let separated = mu > 2 * m_k;
    if separated {
        report.note(format!("mu_k' = {} > 2 m_k = {}", mu, 2 * m_k));
    } else {
        report.inconclusive(format!(
            "mu_k' = {} <= 2 m_k = {}: the 1/2 gain is not implied",
            mu,
            2 * m_k
        ));
    }
    if window > coarse.returns.len() {
        report.inconclusive(format!(
            "window {} exceeds the {} coarse blocks available",
            window,
            coarse.returns.len()
        ));
    }
    let fine_h: Vec<Rational> = fine.returns.iter().map(|w| h_of(w).unwrap()).collect();
    for j in 0..window.min(coarse.returns.len()) {
        let w = &coarse.returns[j];
        let Some(range) = coarse.constituents(fine, j) else {
            report.check(false, || {
                cx(
                    format!("block {} at offset {}", j + 1, coarse.offsets[j]),
                    Some(coarse.offsets[j]),
                    "boundaries of the finer factorization",
                    "refinement mismatch",
                )
            });
            continue;
        };
        let crit = critical_positions(w).unwrap()[0];
        let mut at = coarse.offsets[j];
        let mut ell_len = 0;
        let mut weighted = 0u64;
        let mut min_h: Option<Rational> = None;
        for i in range.clone() {
            let len = fine.returns[i].len();
            if at - coarse.offsets[j] < crit && crit <= at + len - coarse.offsets[j] {
                ell_len = len;
            }
            weighted += (fine_h[i] * Rational::from(len as u64)).to_integer();
            min_h = Some(min_h.map_or(fine_h[i], |m| m.min(fine_h[i])));
            at += len;
        }
        let min_h = min_h.unwrap();
        let n = w.len() as u64;
        let h = h_of(w).unwrap();
        let chain = Rational::new(weighted + n - ell_len as u64, n);
        let corollary = min_h + Rational::from(1) - rat(ell_len, w.len());
        let block = || format!("w_{{k',{}}} (offset {})", j + 1, coarse.offsets[j]);
        report.check(h >= chain, || {
            cx(block(), Some(crit), format!(">= {}", chain), h)
        });
        report.check(chain >= corollary, || {
            cx(block(), Some(crit), format!(">= {}", corollary), chain)
        });
        if separated {
            let half = min_h + Rational::new(1, 2);
            report.check(corollary >= half, || {
                cx(block(), Some(crit), format!(">= {}", half), corollary)
            });
        }
        if j == 0 {
            report.note(format!(
                "j=1: |w|={} constituents={} h={} chain={} min-h={}",
                w.len(),
                range.len(),
                h,
                chain,
                min_h
            ));
        }
    }
    report.finish()
}

/// Builds the level-`k` and level-`k'` α-factorizations of the first
/// `horizon` letters of `s` and runs [`check_lemma_h_step`].
///
/// Without an explicit `k'`, the least `k' > k` whose windowed `μ_{k'}`
/// exceeds `2 m_k` is used, searching up to `k + 8`.
pub fn check_lemma_h_alpha(
    s: &WordSource,
    k: usize,
    k_prime: Option<usize>,
    horizon: usize,
    window: usize,
    bound: Option<RepetitionBound>,
) -> VerificationReport {
    let failed = |note: String| {
        let mut r = ReportBuilder::new("lemma-h")
            .param("word", s.descriptor())
            .param("k", k)
            .param("horizon", horizon);
        r.inconclusive(note);
        r.finish()
    };
    if k == 0 || k_prime.is_some_and(|kp| kp <= k) {
        return failed(format!("need 1 <= k < k', got k={} k'={:?}", k, k_prime));
    }
    let top = k_prime.unwrap_or(k + 8);
    let chain = match alpha_chain(s, top, horizon, bound) {
        Ok(c) => c,
        Err(e) if k_prime.is_none() => {
            // The automatic search may run past what the window supports.
            let mut depth = top;
            loop {
                depth -= 1;
                if depth <= k {
                    return failed(e.to_string());
                }
                if let Ok(c) = alpha_chain(s, depth, horizon, bound) {
                    break c;
                }
            }
        }
        Err(e) => return failed(e.to_string()),
    };
    s.with_prefix(horizon, |text| {
        let fine = match alpha_factorization(text, &chain, k) {
            Ok(f) => f,
            Err(e) => return failed(e.to_string()),
        };
        let mut chosen = None;
        let candidates = match k_prime {
            Some(kp) => kp..=kp,
            None => k + 1..=chain.entries.len(),
        };
        for kp in candidates {
            match alpha_factorization(text, &chain, kp) {
                Ok(c) => {
                    let done = k_prime.is_some() || c.min_return_len > 2 * fine.max_return_time;
                    if done {
                        chosen = Some((kp, c));
                        break;
                    }
                }
                Err(e) => return failed(format!("k' = {}: {}", kp, e)),
            }
        }
        let Some((kp, coarse)) = chosen else {
            return failed(format!(
                "no k' <= {} with mu_k' > 2 m_k = {}",
                chain.entries.len(),
                2 * fine.max_return_time
            ));
        };
        let window = if window == 0 {
            coarse.returns.len()
        } else {
            window
        };
        let mut report = check_lemma_h_step(&fine, &coarse, window);
        report
            .parameters
            .insert("word".into(), s.descriptor().into());
        report.parameters.insert("k".into(), k.to_string());
        report.parameters.insert("k'".into(), kp.to_string());
        report
            .parameters
            .insert("horizon".into(), horizon.to_string());
        report
    })
}

/// Where the repetition bound `e` comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExponentSource {
    /// A known bound, e.g. 2 for an overlap-free word.
    Certified(usize),
    /// The largest exponent seen in the window, refused if it is still
    /// growing between half the window and the full window.
    Windowed,
}

/// The inequality chain for one dyadic step `k -> k'`.
///
/// For blocks `z = z_{k',j}`, `j = 1..=window`, with period `p` and
/// `z = v^s v'`, asserts `p e >= 2^{k'}`, `p >= 2^{k+1}`, `2 s p > 2^{k'}`
/// and
///
/// ```text
/// h(z) >= b + s (p - 2^k) / 2^{k'} >= b + s p / 2^{k'+1} > b + 1/4
/// ```
///
/// where `b` is the least `h` over the level-`k` blocks inside `z`.
pub fn check_lemma_b_step(
    s: &WordSource,
    k: usize,
    k_prime: usize,
    window: usize,
    exponent: ExponentSource,
) -> VerificationReport {
    let mut report = ReportBuilder::new("lemma-b")
        .param("word", s.descriptor())
        .param("k", k)
        .param("k'", k_prime)
        .param("window", window);
    if k_prime <= k || k_prime >= 32 || window == 0 {
        report.inconclusive(format!(
            "need k < k' < 32 and a nonempty window, got k={} k'={} window={}",
            k, k_prime, window
        ));
        return report.finish();
    }
    let big = 1usize << k_prime;
    let small = 1usize << k;
    let horizon = big * (window + 1);
    let text = s.prefix(horizon);
    let e = match exponent {
        ExponentSource::Certified(e) => {
            report = report.param("e", format!("{} (certified)", e));
            e
        }
        ExponentSource::Windowed => {
            let full = repetition_exponent_estimate(&text, horizon / 2);
            let half = repetition_exponent_estimate(&text[..horizon / 2], horizon / 4);
            report = report.param("e", format!("{} (windowed)", full));
            if full > half {
                report.inconclusive(format!(
                    "repetition exponent still growing: {} in {} letters, {} in {}",
                    half,
                    horizon / 2,
                    full,
                    horizon
                ));
                return report.finish();
            }
            report.windowed();
            full
        }
    };
    if big < e * 2 * small {
        report.inconclusive(format!("2^k' = {} < e 2^(k+1) = {}", big, e * 2 * small));
        return report.finish();
    }
    let coarse = dyadic_factorization(&text, k_prime).unwrap();
    let fine = dyadic_factorization(&text, k).unwrap();
    let ratio = big / small;
    let fine_h: Vec<Rational> = fine.blocks.iter().map(|z| h_of(z).unwrap()).collect();
    for j in 1..=window {
        let z = &coarse.blocks[j];
        let p = period(z).unwrap();
        let reps = big / p;
        let label = || format!("z_{{k',{}}}", j);
        if !report.check(p * e >= big && p >= 2 * small, || {
            cx(
                label(),
                Some(j * big),
                format!(">= max({}/{}, {})", big, e, 2 * small),
                p,
            )
        }) {
            continue;
        }
        report.check(2 * reps * p > big, || {
            cx(
                label(),
                Some(j * big),
                format!("2sp > {}", big),
                2 * reps * p,
            )
        });
        let b = fine_h[j * ratio..(j + 1) * ratio]
            .iter()
            .min()
            .copied()
            .unwrap();
        let h = h_of(z).unwrap();
        let first = b + rat(reps * (p - small), big);
        let second = b + rat(reps * p, 2 * big);
        report.check(h >= first, || {
            cx(label(), Some(j * big), format!(">= {}", first), h)
        });
        report.check(first >= second, || {
            cx(label(), Some(j * big), format!(">= {}", second), first)
        });
        report.check(second > b + Rational::new(1, 4), || {
            cx(label(), Some(j * big), format!("> {} + 1/4", b), second)
        });
    }
    report.windowed();
    report.finish()
}
