//! Exact calculus of `sh` factors, boundary values and delta atoms.

mod expr;
mod factor;
mod ops;
mod shift;

pub use expr::{Coef, DistExpr, DistTerm, Mat};
pub use factor::{Bv, TrigFactor};
pub use ops::{equal_numeric, plemelj_reduce, rel_residual, residue, EqConfig, EqReport, Sampler, Strip};
pub use shift::{Assignment, ShiftExpr};

use thiserror::Error;

use crate::params::ParamError;

#[derive(Debug, Error, PartialEq)]
pub enum TrigError {
    #[error("variable `{0}` has no value")]
    Unassigned(String),
    #[error("{factor} is within {distance:e} of a pole")]
    PoleProximity { factor: String, distance: f64 },
    #[error("expression carries delta atoms; use the residue/delta APIs")]
    DeltaPresent,
    #[error("no boundary-value pair to reduce")]
    NoPair,
    #[error("boundary-value pair differs beyond the i0 tag")]
    MismatchedPair,
    #[error("point is not a pole")]
    NotAPole,
    #[error("pole of order higher than one")]
    HigherOrder,
    #[error("delta of zero")]
    DegenerateDelta,
    #[error("delta atom {0} has no unit-coefficient variable")]
    NonUnitDelta(String),
    #[error("too many samples landed near poles")]
    SamplingExhausted,
    #[error(transparent)]
    Param(#[from] ParamError),
}
