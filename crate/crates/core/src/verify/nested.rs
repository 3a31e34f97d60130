//! Structural claims about the nested block word
//! `u_i = u_{i-1} a (u_{i-1} b)^{n_i} u_{i-1}`.

use std::collections::BTreeSet;

use super::{cx, ReportBuilder, VerificationReport};
use crate::factorization::occurrences;
use crate::periodicity::{local_period_infinite, InfiniteLocalPeriod};
use crate::words::{
    nested_block, nested_letter, nested_toeplitz, nested_word, Alphabet, Letter, NestedParams,
};

const A: char = 'a';
const B: char = 'b';

fn letter(c: char) -> Letter {
    Alphabet::binary().letter(c).unwrap()
}

fn render(w: &[Letter]) -> String {
    Alphabet::binary().render(w)
}

/// `s_j^{-1} u_{j-1} a (u_{j-1} b)^{n_j} s_j` for `j >= 1`, or `None` if
/// `s_j` is not a prefix of the word it is stripped from.
pub fn expected_repetition_word(params: &NestedParams, j: usize) -> Option<Vec<Letter>> {
    let prev = nested_block(params, j - 1);
    let s = params.s_word(j);
    let mut x = prev.clone();
    x.push(letter(A));
    for _ in 0..params.n(j) {
        x.extend_from_slice(&prev);
        x.push(letter(B));
    }
    x.extend_from_slice(&s);
    x.starts_with(&s).then(|| x[s.len()..].to_vec())
}

/// The local period at `d_j` equals `(n_j + 1)(|u_{j-1}| + 1)` and its
/// witness equals [`expected_repetition_word`], for `j = 1..=depth`.
///
/// Without an explicit `cap` each `j` uses the closed form plus one.
pub fn check_big(params: &NestedParams, depth: usize, cap: Option<usize>) -> VerificationReport {
    let mut report = ReportBuilder::new("big")
        .param("sequence", params)
        .param("J", depth)
        .param(
            "cap",
            cap.map_or("closed-form+1".to_string(), |c| c.to_string()),
        );
    let source = nested_word(params);
    for j in 1..=depth {
        let d = params.d(j);
        let expected = params.predicted_local_period(j);
        let cap_j = cap.unwrap_or(expected + 1);
        match local_period_infinite(&source, d, cap_j) {
            InfiniteLocalPeriod::CapExceeded { cap } => {
                if cap < expected {
                    report.inconclusive(format!(
                        "j={}: cap {} below the closed form {}, cap exceeded at d_j={}",
                        j, cap, expected, d
                    ));
                } else {
                    report.check(false, || {
                        cx(
                            source.render_prefix(d + cap),
                            Some(d),
                            expected,
                            "cap-exceeded",
                        )
                    });
                }
            }
            InfiniteLocalPeriod::Found(witness) => {
                let ok = report.check(witness.length == expected, || {
                    cx(
                        source.render_prefix(d + witness.length),
                        Some(d),
                        expected,
                        witness.length,
                    )
                });
                let r = expected_repetition_word(params, j);
                let same = r.as_deref() == Some(&witness.word[..]);
                report.check(same, || {
                    cx(
                        source.render_prefix(d + witness.length),
                        Some(d),
                        r.as_deref().map_or("<strip failed>".into(), render),
                        render(&witness.word),
                    )
                });
                if ok && same {
                    report.note(format!(
                        "j={}: d_j={} p={} r_j={}",
                        j,
                        d,
                        witness.length,
                        if witness.length <= 64 {
                            render(&witness.word)
                        } else {
                            format!("<{} letters>", witness.length)
                        }
                    ));
                }
            }
        }
    }
    report.finish()
}

/// With cap one below the closed form the search at `d_j` must come back
/// empty, and with the closed form itself it must succeed.
pub fn check_big_sharpness(params: &NestedParams, depth: usize) -> VerificationReport {
    let mut report = ReportBuilder::new("big-sharpness")
        .param("sequence", params)
        .param("J", depth);
    let source = nested_word(params);
    for j in 1..=depth {
        let d = params.d(j);
        let expected = params.predicted_local_period(j);
        let below = local_period_infinite(&source, d, expected - 1);
        report.check(
            matches!(below, InfiniteLocalPeriod::CapExceeded { .. }),
            || {
                cx(
                    source.render_prefix(d + expected),
                    Some(d),
                    format!("cap-exceeded at cap {}", expected - 1),
                    format!("{:?}", below.length()),
                )
            },
        );
        let at = local_period_infinite(&source, d, expected);
        report.check(at.length() == Some(expected), || {
            cx(
                source.render_prefix(d + expected),
                Some(d),
                expected,
                format!("{:?}", at.length()),
            )
        });
    }
    report.finish()
}

/// The shortest repetition word at `d_{j+1}` is
/// `s_{j+1}^{-1} u_j a (u_j b)^{n_{j+1}} s_{j+1}`, of length
/// `(n_{j+1} + 1)(|u_j| + 1)`. `j = 0` covers `r_1 = b^{n_1} a`.
pub fn check_rj(params: &NestedParams, j: usize) -> VerificationReport {
    let mut report = ReportBuilder::new("rj")
        .param("sequence", params)
        .param("j", j);
    let next = j + 1;
    let d = params.d(next);
    let Some(r) = expected_repetition_word(params, next) else {
        report.check(false, || {
            cx(
                render(&params.s_word(next)),
                None,
                "s_{j+1} is a prefix",
                "strip failed",
            )
        });
        return report.finish();
    };
    let expected_len = params.predicted_local_period(next);
    report.check(r.len() == expected_len, || {
        cx(render(&r), None, expected_len, r.len())
    });
    let source = nested_word(params);
    match local_period_infinite(&source, d, r.len() + 1) {
        InfiniteLocalPeriod::Found(w) => {
            report.check(w.word == r, || {
                cx(
                    source.render_prefix(d + r.len()),
                    Some(d),
                    render(&r),
                    render(&w.word),
                )
            });
        }
        InfiniteLocalPeriod::CapExceeded { cap } => {
            report.check(false, || {
                cx(
                    source.render_prefix(d + cap),
                    Some(d),
                    r.len(),
                    "cap-exceeded",
                )
            });
        }
    }
    report.note(format!("|r_{}| = {}", next, r.len()));
    report.finish()
}

/// Greedy decoding of `text` into blocks `u·a` / `u·b`.
fn decode_blocks(text: &[Letter], unit: &[Letter]) -> Option<Vec<char>> {
    let mut pos = 0;
    let mut blocks = Vec::new();
    while pos < text.len() {
        if !text[pos..].starts_with(unit) || pos + unit.len() >= text.len() {
            return None;
        }
        let c = Alphabet::binary().symbol(text[pos + unit.len()]);
        blocks.push(c);
        pos += unit.len() + 1;
    }
    Some(blocks)
}

/// `u_i a` and `u_i b` are products of the blocks `u_{i-1} a`, `u_{i-1} b`.
pub fn check_plus(params: &NestedParams, depth: usize) -> VerificationReport {
    let mut report = ReportBuilder::new("plus")
        .param("sequence", params)
        .param("I", depth);
    for i in 1..=depth {
        let u = nested_block(params, i);
        let unit = nested_block(params, i - 1);
        for c in [A, B] {
            let mut text = u.clone();
            text.push(letter(c));
            let decoded = decode_blocks(&text, &unit);
            report.check(decoded.is_some(), || {
                cx(
                    render(&text),
                    None,
                    format!("product of u_{}a / u_{}b", i - 1, i - 1),
                    "greedy decode failed",
                )
            });
            if let (Some(blocks), true) = (decoded, i <= 2) {
                let shown: String = blocks
                    .iter()
                    .map(|b| format!("(u_{}{})", i - 1, b))
                    .collect();
                report.note(format!("u_{}{} = {}", i, c, shown));
            }
        }
    }
    report.finish()
}

/// Every occurrence of `u_{i'}` (for `1 <= i' <= depth`) in the first
/// `horizon` letters is a multiple of `|u_{i'}| + 1`.
pub fn check_occurrence_rigidity(
    params: &NestedParams,
    depth: usize,
    horizon: usize,
) -> VerificationReport {
    let mut report = ReportBuilder::new("rigidity")
        .param("sequence", params)
        .param("i", depth)
        .param("horizon", horizon);
    report.windowed();
    let source = nested_word(params);
    let text = source.prefix(horizon);
    for i in 1..=depth {
        let u = nested_block(params, i);
        if u.len() > horizon {
            report.inconclusive(format!("|u_{}| = {} exceeds the horizon", i, u.len()));
            continue;
        }
        let block = params.block_len(i);
        let occ = occurrences(&u, &text);
        for &k in &occ {
            report.check(k % block == 0, || {
                cx(render(&u), Some(k), format!("multiple of {}", block), k)
            });
        }
        report.note(format!("u_{}: {} occurrences", i, occ.len()));
    }
    report.finish()
}

/// The congruence formula agrees with the block recursion on `1..=len`.
pub fn check_letter_formula(params: &NestedParams, len: usize) -> VerificationReport {
    let mut report = ReportBuilder::new("letter-formula")
        .param("sequence", params)
        .param("N", len);
    let recursion = nested_word(params).prefix(len);
    for i in 1..=len {
        let formula = nested_letter(params, i);
        report.check(formula == recursion[i - 1], || {
            cx(
                render(&recursion[..i]),
                Some(i),
                render(&recursion[i - 1..i]),
                render(&[formula]),
            )
        });
    }
    report.finish()
}

/// Toeplitz stage `i` agrees with the recursion on the first `|u_i|`
/// letters for every stage up to the one covering `len`, and that stage
/// agrees on the first `len` letters.
pub fn check_toeplitz(params: &NestedParams, len: usize) -> VerificationReport {
    let top = params.depth_for(len);
    let mut report = ReportBuilder::new("toeplitz")
        .param("sequence", params)
        .param("N", len);
    report.note(format!("stages 1..={}", top));
    let recursion = nested_word(params).prefix(len.max(1));
    for stage in 1..=top {
        let upto = params.u_len(stage).min(len);
        let word = nested_toeplitz(params, stage).prefix(upto);
        let mismatch = (0..upto).find(|&k| word[k] != recursion[k]);
        report.check(mismatch.is_none(), || {
            let k = mismatch.unwrap();
            cx(
                format!("stage {}", stage),
                Some(k + 1),
                render(&recursion[k..k + 1]),
                render(&word[k..k + 1]),
            )
        });
    }
    report.finish()
}

/// Every factor of `u_{i'}` (length at most `max_factor_len`) returns
/// within `|u_{i'}| + 1` letters, for `1 <= i' <= depth`.
pub fn check_return_time_bound(
    params: &NestedParams,
    depth: usize,
    horizon: usize,
    max_factor_len: Option<usize>,
) -> VerificationReport {
    let mut report = ReportBuilder::new("return-time")
        .param("sequence", params)
        .param("i", depth)
        .param("horizon", horizon)
        .param(
            "max_factor_len",
            max_factor_len.map_or("|u_i|".to_string(), |m| m.to_string()),
        );
    report.windowed();
    if depth == 0 {
        report.note("i = 0: u_0 is empty, nothing to check");
        return report.finish();
    }
    let text = nested_word(params).prefix(horizon);
    for i in 1..=depth {
        let u = nested_block(params, i);
        let bound = u.len() + 1;
        if 2 * bound > horizon {
            report.inconclusive(format!("horizon too short for |u_{}| + 1 = {}", i, bound));
            continue;
        }
        let longest = max_factor_len.unwrap_or(u.len()).min(u.len());
        let factors: BTreeSet<&[Letter]> = (1..=longest).flat_map(|len| u.windows(len)).collect();
        let mut worst = 0;
        for z in &factors {
            let occ = occurrences(z, &text);
            let gap = occ.windows(2).map(|p| p[1] - p[0]).max().unwrap_or(0);
            // Past the last occurrence, a return within the bound would have
            // fit in the window unless the tail is shorter than bound + |z|.
            let open = occ.last().map_or(horizon, |&o| horizon - o);
            worst = worst.max(gap);
            report.check(gap <= bound && open < bound + z.len(), || {
                cx(
                    render(z),
                    occ.first().copied(),
                    format!("<= {}", bound),
                    gap.max(open),
                )
            });
        }
        report.note(format!(
            "u_{}: {} factors, longest return {}",
            i,
            factors.len(),
            worst
        ));
    }
    report.finish()
}
