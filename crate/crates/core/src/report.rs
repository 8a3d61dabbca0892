//! Pass/fail records shared by every checker and by the campaign harness.

use serde::{Deserialize, Serialize};

/// One verified claim: what was checked, whether it held, and on failure a
/// witness precise enough to replay the check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    /// Human-readable context: which instance, which parameters.
    pub detail: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckRecord {
    pub fn pass(name: impl Into<String>, detail: impl Into<String>) -> Self {
        CheckRecord { name: name.into(), detail: detail.into(), passed: true, witness: None }
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>, witness: impl Into<String>) -> Self {
        CheckRecord { name: name.into(), detail: detail.into(), passed: false, witness: Some(witness.into()) }
    }

    pub fn of(name: impl Into<String>, detail: impl Into<String>, passed: bool, witness: impl Into<String>) -> Self {
        if passed {
            CheckRecord::pass(name, detail)
        } else {
            CheckRecord::fail(name, detail, witness)
        }
    }
}

/// An ordered collection of check records. Deterministic given the inputs:
/// no timestamps, no wall-clock data, stable ordering.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct VerificationReport {
    pub campaign: String,
    pub seed: u64,
    /// Canonical snapshot of the configuration that produced this report.
    pub config: String,
    pub checks: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn new(campaign: impl Into<String>) -> Self {
        VerificationReport { campaign: campaign.into(), ..Default::default() }
    }

    pub fn with_seed(campaign: impl Into<String>, seed: u64, config: impl Into<String>) -> Self {
        VerificationReport { campaign: campaign.into(), seed, config: config.into(), checks: Vec::new() }
    }

    pub fn push(&mut self, record: CheckRecord) {
        self.checks.push(record);
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn num_passed(&self) -> usize {
        self.checks.iter().filter(|c| c.passed).count()
    }

    pub fn num_failed(&self) -> usize {
        self.checks.len() - self.num_passed()
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn summary(&self) -> String {
        format!("{}: {} checks, {} failed", self.campaign, self.checks.len(), self.num_failed())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }
}
