//! Identity-check records shared by the symbolic and numerical verifiers.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// A formula as printed in the source literature that is false; the corrected
    /// form is checked as a separate entry. Does not fail a suite.
    Erratum,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub id: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl IdentityCheck {
    pub fn exact(id: impl Into<String>, ok: bool, witness: impl FnOnce() -> String) -> Self {
        IdentityCheck {
            id: id.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            residual: None,
            witness: if ok { None } else { Some(witness()) },
            note: None,
        }
    }

    pub fn numeric(id: impl Into<String>, residual: f64, tol: f64) -> Self {
        IdentityCheck {
            id: id.into(),
            status: if residual < tol { Status::Pass } else { Status::Fail },
            residual: Some(residual),
            witness: None,
            note: None,
        }
    }

    /// Records a misprinted formula: `literal_holds` should be false.
    pub fn erratum(id: impl Into<String>, literal_holds: bool, note: impl Into<String>) -> Self {
        IdentityCheck {
            id: id.into(),
            status: if literal_holds { Status::Pass } else { Status::Erratum },
            residual: None,
            witness: None,
            note: Some(note.into()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn with_residual(mut self, r: f64) -> Self {
        self.residual = Some(r);
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<IdentityCheck>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>, checks: Vec<IdentityCheck>) -> Self {
        let passed = checks.iter().all(|c| c.passed());
        SuiteReport { suite: suite.into(), passed, checks, notes: Vec::new() }
    }

    pub fn with_notes(mut self, notes: Vec<String>) -> Self {
        self.notes = notes;
        self
    }

    pub fn failures(&self) -> Vec<&IdentityCheck> {
        self.checks.iter().filter(|c| !c.passed()).collect()
    }

    pub fn max_residual(&self) -> Option<f64> {
        self.checks.iter().filter_map(|c| c.residual).fold(None, |m, r| Some(m.map_or(r, |x: f64| x.max(r))))
    }
}
