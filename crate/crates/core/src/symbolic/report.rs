use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Outcome of one exact certification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertReport {
    pub check: String,
    pub pass: bool,
    /// On failure: an evaluation point and both sides' values there.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    pub elapsed_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CertReport {
    pub(crate) fn timed(check: &str, start: Instant) -> Self {
        Self {
            check: check.to_string(),
            pass: false,
            witness: None,
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
            detail: None,
        }
    }

    pub(crate) fn passed(mut self, pass: bool) -> Self {
        self.pass = pass;
        self
    }

    pub(crate) fn with_witness(mut self, w: Value) -> Self {
        self.witness = Some(w);
        self
    }

    pub(crate) fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }
}
