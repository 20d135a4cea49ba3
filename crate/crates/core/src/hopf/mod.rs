//! The infinite Hopf family `{A_{hbar, eta^(n)}(g^)_{c_n}}`: coproducts `Delta+-_n`, counits,
//! antipodes `S+-_n` on formal current expressions, the axioms on the level-zero evaluation
//! module, and level-`k` images on the boson backend.

mod axioms;
mod expr;
mod levelk;

pub use axioms::*;
pub use expr::*;
pub use levelk::*;

use thiserror::Error;

use crate::boson::BosonError;
use crate::evalrep::EvalError;
use crate::params::ParamError;
use crate::trigcalc::TrigError;

#[derive(Debug, Error)]
pub enum HopfError {
    #[error("expected a single tensor slot, got degree {0}")]
    Degree(usize),
    #[error("family tags do not match: {0}")]
    Tags(String),
    #[error("level c_{0} is not materialized")]
    MissingLevel(i32),
    #[error("backend cannot realize {0}")]
    Unsupported(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Boson(#[from] BosonError),
    #[error(transparent)]
    Trig(#[from] TrigError),
    #[error(transparent)]
    Param(#[from] ParamError),
}
