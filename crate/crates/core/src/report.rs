//! Violation reports returned by the axiom checkers.

use std::fmt;

use serde::{Deserialize, Serialize};

/// One violated axiom together with the first witness tuple found and the
/// total number of violating tuples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: String,
    pub witness: Vec<usize>,
    pub count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// Result of an exhaustive check. Empty means the object is valid.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    /// Records a violation. Repeated hits on the same axiom only bump the
    /// counter; the first witness is kept.
    pub fn record(&mut self, axiom: &str, witness: &[usize]) {
        if let Some(v) = self.violations.iter_mut().find(|v| v.axiom == axiom) {
            v.count += 1;
            return;
        }
        self.violations.push(Violation {
            axiom: axiom.to_string(),
            witness: witness.to_vec(),
            count: 1,
            detail: None,
        });
    }

    pub fn record_detail(&mut self, axiom: &str, witness: &[usize], detail: impl Into<String>) {
        let before = self.violations.len();
        self.record(axiom, witness);
        if self.violations.len() > before {
            self.violations.last_mut().unwrap().detail = Some(detail.into());
        }
    }

    pub fn has(&self, axiom: &str) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }

    pub fn get(&self, axiom: &str) -> Option<&Violation> {
        self.violations.iter().find(|v| v.axiom == axiom)
    }

    pub fn merge(&mut self, prefix: &str, other: Report) {
        for mut v in other.violations {
            v.axiom = format!("{prefix}{}", v.axiom);
            self.violations.push(v);
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        for v in &self.violations {
            write!(f, "{}: witness {:?} ({} violation(s))", v.axiom, v.witness, v.count)?;
            if let Some(d) = &v.detail {
                write!(f, " [{d}]")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
