//! Validation reports and the shared check-report document.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A named axiom failure with a witness in canonical identifiers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub name: String,
    pub witness: String,
}

/// Violations are data: an empty report means the object is valid.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, name: &str, witness: impl Into<String>) {
        self.violations.push(Violation {
            name: name.to_string(),
            witness: witness.into(),
        });
    }

    pub fn has(&self, name: &str) -> bool {
        self.violations.iter().any(|v| v.name == name)
    }

    pub fn into_result(self, what: &'static str) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::Invalid {
                what,
                violations: self
                    .violations
                    .into_iter()
                    .map(|v| format!("{}: {}", v.name, v.witness))
                    .collect(),
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub witness: Option<String>,
}

/// `{ "checks": [{"name": ..., "pass": ..., "witness": ...}] }`
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn pass(&mut self, name: impl Into<String>) {
        self.record(name, true, None);
    }

    pub fn fail(&mut self, name: impl Into<String>, witness: impl Into<String>) {
        self.record(name, false, Some(witness.into()));
    }

    pub fn record(&mut self, name: impl Into<String>, pass: bool, witness: Option<String>) {
        self.checks.push(Check {
            name: name.into(),
            pass,
            witness,
        });
    }

    /// Records `Ok` as a pass and `Err` as a failure carrying the error.
    pub fn record_result<T>(&mut self, name: impl Into<String>, r: &Result<T>) {
        match r {
            Ok(_) => self.pass(name),
            Err(e) => self.fail(name, e.to_string()),
        }
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

impl From<&ValidationReport> for Report {
    fn from(v: &ValidationReport) -> Self {
        let mut r = Report::new();
        for violation in &v.violations {
            r.fail(violation.name.clone(), violation.witness.clone());
        }
        r
    }
}
