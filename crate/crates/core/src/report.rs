//! Machine-readable check records.
//!
//! Every verification in the crate reduces to an exact residual: a record
//! passes iff its residual string is `"0"`. Inequality-style checks report
//! their total violation the same way, so the rule holds uniformly.

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

/// One verified relation instance.
#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    /// Which relation was evaluated, named by what it states.
    pub relation: String,
    /// The semigroup element involved, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<String>,
    /// The algebra element involved, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window_depth: Option<u32>,
    /// Exact residual as a fraction string; `"0"` iff the relation holds on
    /// the window.
    pub residual: String,
    pub pass: bool,
    /// Present when evaluation itself failed rather than the relation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckRecord {
    pub fn exact(relation: impl Into<String>, residual: &BigRational) -> Self {
        CheckRecord {
            relation: relation.into(),
            p: None,
            a: None,
            window_depth: None,
            residual: residual.to_string(),
            pass: residual.is_zero(),
            note: None,
        }
    }

    /// A record for a check that could not be evaluated.
    pub fn evaluation_error(relation: impl Into<String>, note: impl Into<String>) -> Self {
        CheckRecord {
            relation: relation.into(),
            p: None,
            a: None,
            window_depth: None,
            residual: "1".into(),
            pass: false,
            note: Some(note.into()),
        }
    }

    pub fn with_p(mut self, p: impl ToString) -> Self {
        self.p = Some(p.to_string());
        self
    }

    pub fn with_a(mut self, a: impl ToString) -> Self {
        self.a = Some(a.to_string());
        self
    }

    pub fn with_depth(mut self, depth: u32) -> Self {
        self.window_depth = Some(depth);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// A batch of records with an aggregate verdict.
#[derive(Clone, Debug, Default, Serialize)]
pub struct CheckReport {
    pub records: Vec<CheckRecord>,
}

impl CheckReport {
    pub fn push(&mut self, record: CheckRecord) {
        self.records.push(record);
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.records.extend(other.records);
    }

    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.pass)
    }
}
