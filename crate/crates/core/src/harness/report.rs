//! Structured check results.

use serde::Serialize;
use serde_json::Value;

pub const REPORT_SCHEMA: &str = "minkval-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
    Inconclusive,
}

/// Outcome of one harness check. A failing report always carries a witness.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub schema: &'static str,
    pub check: String,
    pub verdict: Verdict,
    pub trials: usize,
    pub skipped: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
}

impl CheckReport {
    pub fn new(check: impl Into<String>, seed: u64) -> Self {
        CheckReport {
            schema: REPORT_SCHEMA,
            check: check.into(),
            verdict: Verdict::Pass,
            trials: 0,
            skipped: 0,
            seed,
            witness: None,
            details: Value::Null,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Records a failure; the first witness wins.
    pub fn fail(&mut self, witness: Value) {
        self.verdict = Verdict::Fail;
        if self.witness.is_none() {
            self.witness = Some(witness);
        }
    }

    pub fn with_details(mut self, details: Value) -> Self {
        self.details = details;
        self
    }

    /// Folds per-trial outcomes (in trial order) into this report.
    pub fn absorb(&mut self, outcomes: Vec<TrialOutcome>) {
        for o in outcomes {
            match o {
                TrialOutcome::Ok => self.trials += 1,
                TrialOutcome::Skipped => self.skipped += 1,
                TrialOutcome::Failed(w) => {
                    self.trials += 1;
                    self.fail(w);
                }
            }
        }
        if self.verdict == Verdict::Pass && self.trials == 0 && self.skipped > 0 {
            self.verdict = Verdict::Skipped;
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

#[derive(Clone, Debug)]
pub enum TrialOutcome {
    Ok,
    Skipped,
    Failed(Value),
}
