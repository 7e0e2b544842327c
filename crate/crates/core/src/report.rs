//! Check records: the unit of output shared by every verification routine and
//! by the harness report.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub suite: String,
    pub check_id: String,
    /// Name of the identity being verified.
    pub anchor: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
    pub wall_time_ms: f64,
}

impl CheckRecord {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Result of evaluating one identity: `None` on success, otherwise a witness.
pub type Outcome = Option<String>;

/// Runs `f`, timing it; an `Err` counts as a failure whose witness is the error.
pub fn timed(suite: &str, check_id: &str, anchor: &str, f: impl FnOnce() -> Result<Outcome>) -> CheckRecord {
    let t0 = Instant::now();
    let (status, witness) = match f() {
        Ok(None) => (Status::Pass, None),
        Ok(Some(w)) => (Status::Fail, Some(w)),
        Err(e) => (Status::Fail, Some(format!("error: {e}"))),
    };
    CheckRecord {
        suite: suite.to_string(),
        check_id: check_id.to_string(),
        anchor: anchor.to_string(),
        status,
        witness,
        wall_time_ms: t0.elapsed().as_secs_f64() * 1e3,
    }
}

/// Helper for building outcomes from a boolean test.
pub fn expect(ok: bool, witness: impl FnOnce() -> String) -> Outcome {
    if ok {
        None
    } else {
        Some(witness())
    }
}
