//! Machine-readable verification reports.

use serde::Serialize;

use crate::scalar::Scalar;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityRecord {
    /// Stable identifier, e.g. `freud-3`.
    pub id: String,
    /// Short human-readable statement of the identity.
    pub tag: String,
    pub n: usize,
    pub t: f64,
    /// Evaluation points in `x`, empty for scalar identities.
    pub points: Vec<f64>,
    /// `max |sum of terms| / max |term|` over the points.
    pub residual: f64,
    pub threshold: f64,
    pub passed: bool,
    /// Which form of a sign-ambiguous identity the residual refers to.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Report {
    pub entries: Vec<IdentityRecord>,
}

impl Report {
    pub fn push(&mut self, record: IdentityRecord) {
        self.entries.push(record);
    }

    pub fn extend(&mut self, other: Report) {
        self.entries.extend(other.entries);
    }

    pub fn failures(&self) -> usize {
        self.entries.iter().filter(|e| !e.passed).count()
    }

    pub fn all_passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn max_residual(&self, id_prefix: &str) -> f64 {
        self.entries
            .iter()
            .filter(|e| e.id.starts_with(id_prefix))
            .map(|e| e.residual)
            .fold(0.0, f64::max)
    }
}

/// Relative residual of an identity written as a vanishing sum of terms, summed in `T`.
pub fn relative_residual<T: Scalar>(terms: &[T]) -> f64 {
    let scale = terms.iter().fold(0.0f64, |m, v| m.max(v.abs().to_f64_lossy()));
    let sum = terms.iter().cloned().fold(T::zero(), |a, b| a + b);
    if scale == 0.0 {
        0.0
    } else {
        sum.abs().to_f64_lossy() / scale
    }
}
