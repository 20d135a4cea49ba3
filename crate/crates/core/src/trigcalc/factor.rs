//! `sh(pi eta_p * arg)^(+-1)` with an optional boundary-value tag.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use super::shift::{Assignment, ShiftExpr};
use super::TrigError;
use crate::params::ParamTower;

/// Boundary-value prescription on a reciprocal factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Bv {
    None,
    PlusI0,
    MinusI0,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TrigFactor {
    /// Tower index of the period: the argument is scaled by `eta^(period)`.
    pub period: i32,
    pub arg: ShiftExpr,
    pub exponent: i32,
    pub bv: Bv,
}

impl TrigFactor {
    pub fn num(period: i32, arg: ShiftExpr) -> Self {
        TrigFactor { period, arg, exponent: 1, bv: Bv::None }
    }

    pub fn den(period: i32, arg: ShiftExpr) -> Self {
        TrigFactor { period, arg, exponent: -1, bv: Bv::None }
    }

    pub fn with_bv(mut self, bv: Bv) -> Self {
        self.bv = bv;
        self
    }

    /// Canonical form and the sign it costs: own-period lattice shifts are removed
    /// through `sh(x - i pi) = -sh x`, and the leading variable gets a positive coefficient.
    pub fn canonical(&self) -> (f64, TrigFactor) {
        let mut sign = 1.0;
        let mut f = self.clone();
        let k = f.arg.lattice_coeff(f.period);
        if k != 0 {
            f.arg = f.arg.sub(&ShiftExpr::lattice(f.period, k));
            if k % 2 != 0 {
                sign = -sign;
            }
        }
        let lead = f.arg.vars().next().map(|(_, a)| a);
        let flip = match lead {
            Some(a) => a < 0,
            None => f.arg.q() < num_rational::Rational64::from_integer(0),
        };
        if flip {
            f.arg = f.arg.neg();
            sign = -sign;
            f.bv = match f.bv {
                Bv::PlusI0 => Bv::MinusI0,
                Bv::MinusI0 => Bv::PlusI0,
                Bv::None => Bv::None,
            };
        }
        (sign, f)
    }

    pub fn substitute(&self, var: &str, by: &ShiftExpr) -> Self {
        TrigFactor { arg: self.arg.substitute(var, by), ..self.clone() }
    }

    /// Numeric value; reciprocal factors closer than `eps` (argument space) to a zero fail.
    pub fn eval(&self, assign: &Assignment, params: &ParamTower, eps: f64) -> Result<Complex64, TrigError> {
        let x = self.arg.eval(assign, params)?;
        let eta = params.eta_at(self.period)?;
        if self.exponent < 0 {
            let k = (x.im * eta).round();
            let d = (x - Complex64::new(0.0, k / eta)).norm();
            if d < eps {
                return Err(TrigError::PoleProximity { factor: self.to_string(), distance: d });
            }
        }
        let s = (Complex64::new(PI * eta, 0.0) * x).sinh();
        Ok(s.powi(self.exponent))
    }
}

impl fmt::Display for TrigFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.bv {
            Bv::None => "",
            Bv::PlusI0 => " + i0",
            Bv::MinusI0 => " - i0",
        };
        write!(f, "sh(pi eta{} ({}{}))^{}", self.period, self.arg, tag, self.exponent)
    }
}
