//! Empirical trend tables for `h_u(i)`.
//!
//! The limit `h_u(i) -> ∞` cannot be established from a prefix. These
//! reports only record exact values at checkpoints and whether they
//! increase; a passing status is always windowed.

use serde::Serialize;

use super::{cx, ReportBuilder, VerificationReport};
use crate::periodicity::{local_period_infinite, profile_source, PeriodValue};
use crate::words::{nested_word, NestedParams, WordSource};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivergenceRow {
    pub i: usize,
    /// `None` if the local period at `i` exceeded the cap.
    pub local_period: Option<usize>,
    /// `None` if some position up to `i` exceeded the cap.
    pub h: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivergenceReport {
    pub rows: Vec<DivergenceRow>,
    pub report: VerificationReport,
}

/// Exact `h_u(i)` at each checkpoint, with a windowed pass if the values
/// at checkpoints `>= settle_from` never decrease.
pub fn divergence_report(
    s: &WordSource,
    checkpoints: &[usize],
    cap: usize,
    settle_from: usize,
) -> DivergenceReport {
    let mut report = ReportBuilder::new("divergence")
        .param("word", s.descriptor())
        .param("cap", cap)
        .param("settle_from", settle_from)
        .param(
            "checkpoints",
            checkpoints
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(","),
        );
    report.windowed();
    report.note("empirical trend only");
    let mut points: Vec<usize> = checkpoints.iter().copied().filter(|&c| c > 0).collect();
    points.sort_unstable();
    points.dedup();
    let top = points.last().copied().unwrap_or(0);
    let profile = profile_source(s, top, cap);
    let rows: Vec<DivergenceRow> = points
        .iter()
        .map(|&i| DivergenceRow {
            i,
            local_period: profile.at(i).and_then(PeriodValue::finite),
            h: profile.h(i),
        })
        .collect();
    if let Some(first) = profile
        .local_periods
        .iter()
        .position(|v| v.finite().is_none())
    {
        report.inconclusive(format!("cap {} exceeded at position {}", cap, first + 1));
    }
    let settled: Vec<&DivergenceRow> = rows.iter().filter(|r| r.i >= settle_from).collect();
    for pair in settled.windows(2) {
        if let (Some(x), Some(y)) = (pair[0].h, pair[1].h) {
            report.pass();
            if y < x {
                report.inconclusive(format!(
                    "h({}) = {} < h({}) = {}",
                    pair[1].i, y, pair[0].i, x
                ));
            }
        }
    }
    DivergenceReport {
        rows,
        report: report.finish(),
    }
}

/// `h_u(d_j) > p_u(d_j) / d_j` for `j = 1..=depth`.
///
/// Profiles are computed with `cap`, defaulting to four times the largest
/// closed-form local period involved.
pub fn check_block_position_complexity(
    params: &NestedParams,
    depth: usize,
    cap: Option<usize>,
) -> VerificationReport {
    let cap = cap.unwrap_or(4 * params.predicted_local_period(depth.max(1)));
    let mut report = ReportBuilder::new("block-complexity")
        .param("sequence", params)
        .param("J", depth)
        .param("cap", cap);
    report.windowed();
    let source = nested_word(params);
    let top = params.d(depth.max(1));
    let profile = profile_source(&source, top, cap);
    for j in 1..=depth {
        let d = params.d(j);
        let (Some(h), Some(p)) = (
            profile.h(d),
            local_period_infinite(&source, d, cap).length(),
        ) else {
            report.inconclusive(format!("j={}: cap {} exceeded up to d_j={}", j, cap, d));
            continue;
        };
        let bound = Rational::new(p as u64, d as u64);
        report.check(h > bound, || {
            cx(source.render_prefix(d), Some(d), format!("> {}", bound), h)
        });
        report.note(format!(
            "j={}: d_j={} p={} h={} p/d_j={}",
            j, d, p, h, bound
        ));
    }
    report.finish()
}
