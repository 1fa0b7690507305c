//! Law reports: the uniform result of every verification harness.
//!
//! A violation is a report entry, not an error; harnesses never panic on
//! a failed law. Reports serialize to stable JSON for scripting.

use serde::{Deserialize, Serialize};

/// One failed law instance, with enough context to reproduce it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub inputs: String,
    pub expected: String,
    pub got: String,
}

/// Outcome of running a law suite over a set of cases.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawReport {
    pub suite: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub cases: u64,
    /// Cases skipped because a premise could not be certified
    /// (e.g. an inconclusive extension or an undecidable comparison).
    pub skipped: u64,
    pub violations: Vec<Violation>,
}

impl LawReport {
    pub fn new(suite: impl Into<String>) -> Self {
        LawReport {
            suite: suite.into(),
            seed: None,
            cases: 0,
            skipped: 0,
            violations: Vec::new(),
        }
    }

    pub fn with_seed(suite: impl Into<String>, seed: u64) -> Self {
        LawReport {
            seed: Some(seed),
            ..LawReport::new(suite)
        }
    }

    pub fn case(&mut self) {
        self.cases += 1;
    }

    pub fn skip(&mut self) {
        self.cases += 1;
        self.skipped += 1;
    }

    pub fn violation(
        &mut self,
        inputs: impl Into<String>,
        expected: impl Into<String>,
        got: impl Into<String>,
    ) {
        self.violations.push(Violation {
            inputs: inputs.into(),
            expected: expected.into(),
            got: got.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Merges `other` into `self`, keeping input order deterministic.
    pub fn absorb(&mut self, other: LawReport) {
        self.cases += other.cases;
        self.skipped += other.skipped;
        self.violations.extend(other.violations);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape_is_stable() {
        let mut report = LawReport::with_seed("additivity", 7);
        report.case();
        report.violation("f=1/n g=2", "intersecting", "disjoint");
        let js = serde_json::to_value(&report).unwrap();
        assert_eq!(js["suite"], "additivity");
        assert_eq!(js["seed"], 7);
        assert_eq!(js["cases"], 1);
        assert_eq!(js["violations"][0]["expected"], "intersecting");
    }
}
