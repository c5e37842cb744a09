//! Structured outputs shared by the text and JSON renderers.

use serde::{Deserialize, Serialize};

use logsym::{LogNormalFit, TestResult};

/// Everything `logsym test` reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub n: usize,
    pub beta: u32,
    pub theta: f64,
    pub fit: Option<LogNormalFit>,
    pub delta_hat: f64,
    /// Absent for the normal method and for infeasible JEL problems.
    pub lambda: Option<f64>,
    pub decision: String,
    #[serde(flatten)]
    pub result: TestResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UstatReport {
    pub n: usize,
    pub beta: u32,
    pub theta: f64,
    pub naive: bool,
    pub delta_hat: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub leave_one_out: Option<Vec<f64>>,
}
