//! Check records shared by the suites and the command line.

use serde::{Deserialize, Serialize};

/// One verified property: the worst residual over all trials against its
/// tolerance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: String,
    pub k: i64,
    pub trials: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

impl CheckRecord {
    pub fn new(check: impl Into<String>, k: i64, trials: usize, max_residual: f64, tolerance: f64) -> Self {
        CheckRecord {
            check: check.into(),
            k,
            trials,
            pass: max_residual <= tolerance,
            max_residual,
            tolerance,
            detail: None,
        }
    }

    /// Record for an exact property: residual 0 on success, 1 otherwise.
    pub fn exact(check: impl Into<String>, k: i64, trials: usize, ok: bool) -> Self {
        CheckRecord::new(check, k, trials, if ok { 0.0 } else { 1.0 }, 0.0)
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

/// All records of one suite, in a stable order.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub precision: u32,
    pub records: Vec<CheckRecord>,
}

impl Report {
    pub fn new(suite: impl Into<String>, seed: u64, precision: u32) -> Self {
        Report { suite: suite.into(), seed, precision, records: Vec::new() }
    }
    pub fn push(&mut self, r: CheckRecord) {
        self.records.push(r);
    }
    pub fn extend(&mut self, rs: impl IntoIterator<Item = CheckRecord>) {
        self.records.extend(rs);
    }
    pub fn pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }
    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.pass)
    }
}
