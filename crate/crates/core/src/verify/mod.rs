//! One checker per verifiable claim, each producing a [`VerificationReport`].
//!
//! Checkers never upgrade a windowed result to a plain pass: whenever the
//! claim quantifies over an infinite word or an infinite index set and only
//! a prefix was inspected, the best possible status is
//! [`Status::WindowedPass`].

mod divergence;
mod exhaustive;
mod lemmas;
mod nested;

pub use divergence::{check_block_position_complexity, divergence_report, DivergenceReport};
pub use exhaustive::{
    check_cft_exhaustive, check_factor_monotonicity, check_h_superadditivity,
    check_oracle_equivalence, DEFAULT_SEED,
};
pub use lemmas::{
    check_alpha_lemma, check_lemma_b_step, check_lemma_h_alpha, check_lemma_h_step, ExponentSource,
};
pub use nested::{
    check_big, check_big_sharpness, check_letter_formula, check_occurrence_rigidity, check_plus,
    check_return_time_bound, check_rj, check_toeplitz, expected_repetition_word,
};

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    WindowedPass,
    Inconclusive,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::WindowedPass => "windowed-pass",
            Status::Inconclusive => "inconclusive",
            Status::Fail => "fail",
        })
    }
}

impl Status {
    pub fn is_passing(self) -> bool {
        matches!(self, Status::Pass | Status::WindowedPass)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub word: String,
    pub position: Option<usize>,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub claim: String,
    pub parameters: BTreeMap<String, String>,
    pub instances: usize,
    pub failures: usize,
    pub status: Status,
    pub counterexample: Option<Counterexample>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status.is_passing()
    }
}

/// Accumulates instance outcomes; the final status is the worst one seen.
pub(crate) struct ReportBuilder {
    claim: String,
    parameters: BTreeMap<String, String>,
    instances: usize,
    failures: usize,
    counterexample: Option<Counterexample>,
    inconclusive: bool,
    windowed: bool,
    notes: Vec<String>,
}

impl ReportBuilder {
    pub(crate) fn new(claim: &str) -> ReportBuilder {
        ReportBuilder {
            claim: claim.to_string(),
            parameters: BTreeMap::new(),
            instances: 0,
            failures: 0,
            counterexample: None,
            inconclusive: false,
            windowed: false,
            notes: Vec::new(),
        }
    }

    pub(crate) fn param(mut self, key: &str, value: impl ToString) -> ReportBuilder {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub(crate) fn windowed(&mut self) {
        self.windowed = true;
    }

    pub(crate) fn pass(&mut self) {
        self.instances += 1;
    }

    /// Records one instance as passing or failing.
    pub(crate) fn check(&mut self, ok: bool, failure: impl FnOnce() -> Counterexample) -> bool {
        self.instances += 1;
        if !ok {
            self.failures += 1;
            if self.counterexample.is_none() {
                self.counterexample = Some(failure());
            }
        }
        ok
    }

    pub(crate) fn inconclusive(&mut self, note: impl Into<String>) {
        self.inconclusive = true;
        self.notes.push(note.into());
    }

    pub(crate) fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub(crate) fn finish(self) -> VerificationReport {
        let status = if self.failures > 0 {
            Status::Fail
        } else if self.inconclusive {
            Status::Inconclusive
        } else if self.windowed {
            Status::WindowedPass
        } else {
            Status::Pass
        };
        VerificationReport {
            claim: self.claim,
            parameters: self.parameters,
            instances: self.instances,
            failures: self.failures,
            status,
            counterexample: self.counterexample,
            notes: self.notes,
        }
    }
}

pub(crate) fn cx(
    word: impl Into<String>,
    position: Option<usize>,
    expected: impl ToString,
    actual: impl ToString,
) -> Counterexample {
    Counterexample {
        word: word.into(),
        position,
        expected: expected.to_string(),
        actual: actual.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_precedence() {
        let mut b = ReportBuilder::new("x");
        b.pass();
        assert_eq!(b.finish().status, Status::Pass);

        let mut b = ReportBuilder::new("x");
        b.windowed();
        b.pass();
        assert_eq!(b.finish().status, Status::WindowedPass);

        let mut b = ReportBuilder::new("x");
        b.windowed();
        b.inconclusive("cap");
        assert_eq!(b.finish().status, Status::Inconclusive);

        let mut b = ReportBuilder::new("x");
        b.inconclusive("cap");
        b.check(false, || cx("w", Some(1), 2, 3));
        b.check(false, || cx("v", Some(9), 9, 9));
        let r = b.finish();
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.failures, 2);
        assert_eq!(r.counterexample.unwrap().word, "w");
    }

    #[test]
    fn report_json_shape() {
        let r = ReportBuilder::new("demo").param("n", "2").finish();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["status"], "pass");
        assert_eq!(v["parameters"]["n"], "2");
        assert!(v["counterexample"].is_null());
    }
}
