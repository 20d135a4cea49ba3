//! Deformation parameters `(hbar, eta^(n), c_n)` shared by the whole family.

use std::collections::BTreeMap;

use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ParamError {
    #[error("hbar and eta must be positive and finite (hbar={hbar}, eta={eta})")]
    NonPositive { hbar: f64, eta: f64 },
    #[error("level c_{0} is not materialized")]
    MissingLevel(i32),
    #[error("1/eta^({n}) = {inv} <= 0: parameter range exhausted")]
    Range { n: i32, inv: f64 },
}

/// Default denominator bound for the genericity guard.
pub const GENERIC_MAX_DEN: i64 = 12;
pub const GENERIC_TOL: f64 = 1e-9;

/// The parameter tower. `levels[n] = c_n`; `eta^(0) = eta`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParamTower {
    pub hbar: f64,
    pub eta: f64,
    #[serde(serialize_with = "crate::ser::rat_map")]
    levels: BTreeMap<i32, Rational64>,
}

impl ParamTower {
    /// Tower with `c_0, c_1, ...` taken from `levels`.
    pub fn new(hbar: f64, eta: f64, levels: &[Rational64]) -> Result<Self, ParamError> {
        if !(hbar > 0.0 && eta > 0.0 && hbar.is_finite() && eta.is_finite()) {
            return Err(ParamError::NonPositive { hbar, eta });
        }
        let levels = levels.iter().enumerate().map(|(n, &c)| (n as i32, c)).collect();
        Ok(ParamTower { hbar, eta, levels })
    }

    /// Shorthand with integer levels.
    pub fn with_levels(hbar: f64, eta: f64, levels: &[i64]) -> Result<Self, ParamError> {
        let l: Vec<Rational64> = levels.iter().map(|&c| Rational64::from_integer(c)).collect();
        Self::new(hbar, eta, &l)
    }

    /// Materializes `c_n` for any `n`, including negative members.
    pub fn set_level(&mut self, n: i32, c: Rational64) {
        self.levels.insert(n, c);
    }

    pub fn level(&self, n: i32) -> Result<Rational64, ParamError> {
        self.levels.get(&n).copied().ok_or(ParamError::MissingLevel(n))
    }

    pub fn levels(&self) -> impl Iterator<Item = (i32, Rational64)> + '_ {
        self.levels.iter().map(|(&n, &c)| (n, c))
    }

    /// `c = c_0`.
    pub fn c(&self) -> Rational64 {
        self.level(0).unwrap_or_default()
    }

    /// `1/eta^(n)` by telescoping the recursion.
    pub fn inv_eta_at(&self, n: i32) -> Result<f64, ParamError> {
        let mut inv = 1.0 / self.eta;
        if n >= 0 {
            for m in 0..n {
                inv += self.hbar * self.level(m)?.to_f64().unwrap();
            }
        } else {
            for m in n..0 {
                inv -= self.hbar * self.level(m)?.to_f64().unwrap();
            }
        }
        if inv <= 0.0 {
            return Err(ParamError::Range { n, inv });
        }
        Ok(inv)
    }

    pub fn eta_at(&self, n: i32) -> Result<f64, ParamError> {
        Ok(1.0 / self.inv_eta_at(n)?)
    }

    /// `eta' = eta^(1)`.
    pub fn eta_prime(&self) -> Result<f64, ParamError> {
        self.eta_at(1)
    }

    /// `1/eta'' = 1/eta + hbar c/2`.
    pub fn eta_double_prime(&self, c: Rational64) -> f64 {
        if c == Rational64::from_integer(0) {
            return self.eta;
        }
        1.0 / (1.0 / self.eta + 0.5 * self.hbar * c.to_f64().unwrap())
    }

    /// Returns `Some((p, q))` when `hbar * eta` lies within `tol` of `p/q` with `q <= max_den`.
    pub fn genericity_warning(&self, max_den: i64, tol: f64) -> Option<(i64, i64)> {
        let x = self.hbar * self.eta;
        for q in 1..=max_den {
            let p = (x * q as f64).round();
            if (x - p / q as f64).abs() < tol {
                return Some((p as i64, q));
            }
        }
        None
    }

    /// Copy with every level set to zero (the c = 0 family).
    pub fn at_zero_level(&self) -> Self {
        let mut t = self.clone();
        for v in t.levels.values_mut() {
            *v = Rational64::from_integer(0);
        }
        if t.levels.is_empty() {
            t.levels.insert(0, Rational64::from_integer(0));
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_step() {
        let t = ParamTower::with_levels(0.1, 1.0, &[1]).unwrap();
        assert!((t.eta_at(1).unwrap() - 1.0 / 1.1).abs() < 1e-15);
        let z = ParamTower::with_levels(0.37, 0.8, &[0]).unwrap();
        assert_eq!(z.eta_at(1).unwrap(), 0.8);
    }

    #[test]
    fn two_steps() {
        let t = ParamTower::with_levels(0.1, 1.0, &[1, 1]).unwrap();
        assert!((t.eta_at(2).unwrap() - 1.0 / 1.2).abs() < 1e-15);
        assert!(t.eta_at(3).is_err());
    }

    #[test]
    fn negative_members_and_range() {
        let mut t = ParamTower::with_levels(0.5, 1.0, &[1]).unwrap();
        t.set_level(-1, Rational64::from_integer(1));
        assert!((t.inv_eta_at(-1).unwrap() - 0.5).abs() < 1e-15);
        t.set_level(-2, Rational64::from_integer(1));
        assert!(matches!(t.eta_at(-2), Err(ParamError::Range { .. })));
    }

    #[test]
    fn double_prime() {
        let t = ParamTower::with_levels(0.1, 1.0, &[1]).unwrap();
        assert_eq!(t.eta_double_prime(Rational64::from_integer(0)), 1.0);
        assert!((t.eta_double_prime(Rational64::from_integer(1)) - 1.0 / 1.05).abs() < 1e-15);
        let c2 = t.eta_double_prime(Rational64::from_integer(2));
        assert!((c2 - t.eta_prime().unwrap()).abs() < 1e-15);
    }

    #[test]
    fn genericity() {
        let t = ParamTower::with_levels(0.25, 1.0, &[1]).unwrap();
        assert_eq!(t.genericity_warning(GENERIC_MAX_DEN, GENERIC_TOL), Some((1, 4)));
        let g = ParamTower::with_levels(0.1 * std::f64::consts::SQRT_2, 1.0, &[1]).unwrap();
        assert_eq!(g.genericity_warning(GENERIC_MAX_DEN, GENERIC_TOL), None);
    }
}
