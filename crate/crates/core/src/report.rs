//! Structured outcomes of identity checks.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
    #[serde(rename = "UNSUPPORTED-DOMAIN")]
    UnsupportedDomain,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
            Status::UnsupportedDomain => "UNSUPPORTED-DOMAIN",
        }
    }
}

/// One identity check: what was checked, with which parameters, and the evidence.
///
/// A `FAIL` always carries a `witness` that can be reproduced from `params`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub params: Value,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub residual: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificate: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
    pub wall_time_ms: f64,
}

impl VerificationReport {
    pub fn new(check: &str, params: Value, status: Status) -> Self {
        VerificationReport {
            check: check.to_string(),
            params,
            status,
            residual: None,
            witness: None,
            certificate: None,
            note: None,
            wall_time_ms: 0.0,
        }
    }

    pub fn pass(check: &str, params: Value) -> Self {
        Self::new(check, params, Status::Pass)
    }

    pub fn fail(check: &str, params: Value, witness: Value) -> Self {
        let mut r = Self::new(check, params, Status::Fail);
        r.witness = Some(witness);
        r
    }

    pub fn with_residual(mut self, residual: impl Into<String>) -> Self {
        self.residual = Some(residual.into());
        self
    }

    pub fn with_witness(mut self, witness: Value) -> Self {
        self.witness = Some(witness);
        self
    }

    pub fn with_certificate(mut self, c: Value) -> Self {
        self.certificate = Some(c);
        self
    }

    pub fn with_note(mut self, n: impl Into<String>) -> Self {
        self.note = Some(n.into());
        self
    }

    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }

    /// JSON line with the wall-time field zeroed, for reproducibility comparisons.
    pub fn canonical_json(&self) -> String {
        let mut r = self.clone();
        r.wall_time_ms = 0.0;
        serde_json::to_string(&r).expect("report serializes")
    }
}

/// Run `f` and stamp the elapsed wall time on its report.
pub fn timed(f: impl FnOnce() -> VerificationReport) -> VerificationReport {
    let start = Instant::now();
    let mut r = f();
    r.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    r
}

/// Combine several reports: FAIL dominates, then UNSUPPORTED-DOMAIN, then INCONCLUSIVE.
pub fn worst_status<'a>(reports: impl IntoIterator<Item = &'a VerificationReport>) -> Status {
    let mut worst = Status::Pass;
    for r in reports {
        worst = match (worst, r.status) {
            (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
            (Status::UnsupportedDomain, _) | (_, Status::UnsupportedDomain) => Status::UnsupportedDomain,
            (Status::Inconclusive, _) | (_, Status::Inconclusive) => Status::Inconclusive,
            _ => Status::Pass,
        };
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn status_serializes_with_hyphen() {
        let r = VerificationReport::new("x", json!({}), Status::UnsupportedDomain);
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"UNSUPPORTED-DOMAIN\""));
        let back: VerificationReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back.status, Status::UnsupportedDomain);
    }

    #[test]
    fn worst_status_ordering() {
        let p = VerificationReport::pass("a", json!({}));
        let i = VerificationReport::new("b", json!({}), Status::Inconclusive);
        let f = VerificationReport::fail("c", json!({}), json!("w"));
        assert_eq!(worst_status([&p, &i]), Status::Inconclusive);
        assert_eq!(worst_status([&i, &f, &p]), Status::Fail);
        assert_eq!(worst_status([&p]), Status::Pass);
    }
}
