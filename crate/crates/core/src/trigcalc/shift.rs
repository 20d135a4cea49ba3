//! Exact points on the pole lattice: `sum a_k x_k + q i hbar + sum m_p i/eta_p + t`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::TrigError;
use crate::params::ParamTower;

/// Numeric values of the formal variables.
pub type Assignment = BTreeMap<String, Complex64>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Default)]
pub struct ShiftExpr {
    vars: BTreeMap<String, i64>,
    #[serde(serialize_with = "crate::ser::rat")]
    q: Rational64,
    lattice: BTreeMap<i32, i64>,
    #[serde(serialize_with = "crate::ser::rat")]
    t: Rational64,
}

fn clean<K: Ord, V: Zero>(m: &mut BTreeMap<K, V>) {
    m.retain(|_, v| !v.is_zero());
}

impl ShiftExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn var(name: &str) -> Self {
        let mut s = Self::zero();
        s.vars.insert(name.to_string(), 1);
        s
    }

    /// `q i hbar`.
    pub fn ihbar(q: Rational64) -> Self {
        ShiftExpr { q, ..Self::zero() }
    }

    /// `k i / eta_p`.
    pub fn lattice(p: i32, k: i64) -> Self {
        let mut s = Self::zero();
        s.lattice.insert(p, k);
        clean(&mut s.lattice);
        s
    }

    pub fn real(t: Rational64) -> Self {
        ShiftExpr { t, ..Self::zero() }
    }

    /// `x - y`.
    pub fn diff(x: &str, y: &str) -> Self {
        Self::var(x).sub(&Self::var(y))
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (k, v) in &o.vars {
            *r.vars.entry(k.clone()).or_insert(0) += v;
        }
        for (k, v) in &o.lattice {
            *r.lattice.entry(*k).or_insert(0) += v;
        }
        r.q += o.q;
        r.t += o.t;
        clean(&mut r.vars);
        clean(&mut r.lattice);
        r
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut r = self.clone();
        r.vars.values_mut().for_each(|v| *v *= k);
        r.lattice.values_mut().for_each(|v| *v *= k);
        r.q *= Rational64::from_integer(k);
        r.t *= Rational64::from_integer(k);
        clean(&mut r.vars);
        clean(&mut r.lattice);
        r
    }

    pub fn plus_ihbar(&self, q: Rational64) -> Self {
        self.add(&Self::ihbar(q))
    }

    pub fn coeff(&self, var: &str) -> i64 {
        self.vars.get(var).copied().unwrap_or(0)
    }

    pub fn vars(&self) -> impl Iterator<Item = (&str, i64)> {
        self.vars.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn q(&self) -> Rational64 {
        self.q
    }

    pub fn t(&self) -> Rational64 {
        self.t
    }

    pub fn lattice_coeff(&self, p: i32) -> i64 {
        self.lattice.get(&p).copied().unwrap_or(0)
    }

    pub fn lattice_terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.lattice.iter().map(|(&p, &k)| (p, k))
    }

    pub fn is_constant(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        *self == Self::zero()
    }

    /// Constant that is exactly `k i/eta_p`: returns `k`.
    pub fn as_lattice_point(&self, p: i32) -> Option<i64> {
        if !self.vars.is_empty() || !self.q.is_zero() || !self.t.is_zero() {
            return None;
        }
        match self.lattice.len() {
            0 => Some(0),
            1 => self.lattice.get(&p).copied(),
            _ => None,
        }
    }

    /// Replaces `var` by `by` (coefficient of `var` multiplies `by`).
    pub fn substitute(&self, var: &str, by: &ShiftExpr) -> Self {
        let a = self.coeff(var);
        if a == 0 {
            return self.clone();
        }
        let mut rest = self.clone();
        rest.vars.remove(var);
        rest.add(&by.scale(a))
    }

    /// Solves `self = 0` for `var`; the coefficient must be `+-1`.
    pub fn solve_for(&self, var: &str) -> Option<ShiftExpr> {
        let a = self.coeff(var);
        if a != 1 && a != -1 {
            return None;
        }
        let mut rest = self.clone();
        rest.vars.remove(var);
        Some(rest.scale(-a))
    }

    pub fn eval(&self, assign: &Assignment, params: &ParamTower) -> Result<Complex64, TrigError> {
        let mut z = Complex64::new(self.t.to_f64().unwrap(), 0.0);
        for (k, &a) in &self.vars {
            let x = assign.get(k).ok_or_else(|| TrigError::Unassigned(k.clone()))?;
            z += x * a as f64;
        }
        let mut im = self.q.to_f64().unwrap() * params.hbar;
        for (&p, &k) in &self.lattice {
            im += k as f64 * params.inv_eta_at(p)?;
        }
        Ok(z + Complex64::new(0.0, im))
    }
}

impl fmt::Display for ShiftExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (k, &a) in &self.vars {
            parts.push(match a {
                1 => k.clone(),
                -1 => format!("-{k}"),
                _ => format!("{a}{k}"),
            });
        }
        if !self.q.is_zero() {
            parts.push(format!("{}ih", crate::ser::rat_to_string(&self.q)));
        }
        for (&p, &k) in &self.lattice {
            parts.push(format!("{k}i/eta{p}"));
        }
        if !self.t.is_zero() {
            parts.push(crate::ser::rat_to_string(&self.t));
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&parts.join(" + ").replace("+ -", "- "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_cancellation() {
        let a = ShiftExpr::diff("u", "v").plus_ihbar(Rational64::new(1, 2));
        let b = a.sub(&a);
        assert!(b.is_zero());
        assert_eq!(a.add(&ShiftExpr::lattice(0, 1)).sub(&ShiftExpr::lattice(0, 1)), a);
    }

    #[test]
    fn substitute_and_solve() {
        let a = ShiftExpr::diff("u", "z").plus_ihbar(Rational64::new(-1, 2));
        let u = a.solve_for("u").unwrap();
        assert_eq!(u, ShiftExpr::var("z").plus_ihbar(Rational64::new(1, 2)));
        assert!(a.substitute("u", &u).is_zero());
    }

    #[test]
    fn display() {
        let a = ShiftExpr::diff("u", "v").plus_ihbar(Rational64::new(-3, 4));
        assert_eq!(a.to_string(), "u - v - 3/4ih");
    }
}
