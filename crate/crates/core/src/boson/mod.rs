//! Level-one free-boson realization: exponent functions, contractions, zero modes, and
//! the normal-ordering engine used for exchange, delta, and Serre checks.

mod checks;
mod engine;
mod expfn;
mod kernel;
mod zeromode;

pub use checks::*;
pub use engine::*;
pub use expfn::*;
pub use kernel::*;
pub use zeromode::*;

use thiserror::Error;

use crate::params::ParamError;
use crate::trigcalc::TrigError;

#[derive(Debug, Error)]
pub enum BosonError {
    #[error("unsupported contraction: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Trig(#[from] TrigError),
    #[error("sampling exhausted near poles")]
    SamplingExhausted,
}
