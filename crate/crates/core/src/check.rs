//! One verified identity: residual against tolerance, with optional detail.

use serde::Serialize;

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Check {
    pub id: String,
    pub max_residual: f64,
    pub samples: usize,
    pub tol: f64,
    pub pass: bool,
    /// Known-false form kept for reference; excluded from the overall verdict.
    pub informational: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn new(id: impl Into<String>, max_residual: f64, samples: usize, tol: f64) -> Self {
        let pass = max_residual <= tol;
        Check { id: id.into(), max_residual, samples, tol, pass, informational: false, note: None }
    }

    /// A structural yes/no check.
    pub fn structural(id: impl Into<String>, ok: bool) -> Self {
        Check::new(id, if ok { 0.0 } else { 1.0 }, 1, 0.0)
    }

    pub fn failed(id: impl Into<String>, why: impl Into<String>, tol: f64) -> Self {
        Check { note: Some(why.into()), ..Check::new(id, f64::INFINITY, 0, tol) }
    }

    pub fn informational(mut self) -> Self {
        self.informational = true;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Counts toward the verdict and failed.
    pub fn hard_failure(&self) -> bool {
        !self.pass && !self.informational
    }
}

/// `|a - b| / max(|a|, |b|)`, zero when both vanish.
pub fn rel_diff(a: num_complex::Complex64, b: num_complex::Complex64) -> f64 {
    let s = a.norm().max(b.norm());
    if s == 0.0 {
        0.0
    } else {
        (a - b).norm() / s
    }
}
