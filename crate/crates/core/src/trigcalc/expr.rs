//! Sums of (coefficient x trig factors x delta atoms), closed under products.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::factor::TrigFactor;
use super::shift::{Assignment, ShiftExpr};
use super::TrigError;
use crate::params::ParamTower;

pub type Mat = DMatrix<Complex64>;

/// Scalar or dense matrix coefficient. A scalar acts as a multiple of the identity.
#[derive(Clone, Debug, PartialEq)]
pub enum Coef {
    Scalar(Complex64),
    Matrix(Mat),
}

impl Coef {
    pub fn one() -> Self {
        Coef::Scalar(Complex64::new(1.0, 0.0))
    }

    pub fn unit(dim: usize, row: usize, col: usize) -> Self {
        let mut m = Mat::zeros(dim, dim);
        m[(row, col)] = Complex64::new(1.0, 0.0);
        Coef::Matrix(m)
    }

    pub fn mul(&self, o: &Coef) -> Coef {
        match (self, o) {
            (Coef::Scalar(a), Coef::Scalar(b)) => Coef::Scalar(a * b),
            (Coef::Scalar(a), Coef::Matrix(m)) | (Coef::Matrix(m), Coef::Scalar(a)) => Coef::Matrix(m * *a),
            (Coef::Matrix(a), Coef::Matrix(b)) => Coef::Matrix(a * b),
        }
    }

    pub fn add(&self, o: &Coef) -> Coef {
        match (self, o) {
            (Coef::Scalar(a), Coef::Scalar(b)) => Coef::Scalar(a + b),
            (Coef::Scalar(a), Coef::Matrix(m)) | (Coef::Matrix(m), Coef::Scalar(a)) => {
                Coef::Matrix(m + Mat::identity(m.nrows(), m.ncols()) * *a)
            }
            (Coef::Matrix(a), Coef::Matrix(b)) => Coef::Matrix(a + b),
        }
    }

    pub fn scale(&self, s: Complex64) -> Coef {
        self.mul(&Coef::Scalar(s))
    }

    pub fn max_abs(&self) -> f64 {
        match self {
            Coef::Scalar(a) => a.norm(),
            Coef::Matrix(m) => m.iter().map(|z| z.norm()).fold(0.0, f64::max),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.max_abs() == 0.0
    }

    pub fn dim(&self) -> Option<usize> {
        match self {
            Coef::Scalar(_) => None,
            Coef::Matrix(m) => Some(m.nrows()),
        }
    }

    pub fn to_matrix(&self, dim: usize) -> Mat {
        match self {
            Coef::Scalar(a) => Mat::identity(dim, dim) * *a,
            Coef::Matrix(m) => m.clone(),
        }
    }
}

impl Serialize for Coef {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(1))?;
        match self {
            Coef::Scalar(a) => map.serialize_entry("scalar", &[a.re, a.im])?,
            Coef::Matrix(m) => {
                let mut entries = Vec::new();
                for i in 0..m.nrows() {
                    for j in 0..m.ncols() {
                        let z = m[(i, j)];
                        if z.norm() != 0.0 {
                            entries.push((i, j, z.re, z.im));
                        }
                    }
                }
                map.serialize_entry("matrix", &(m.nrows(), entries))?;
            }
        }
        map.end()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistTerm {
    pub coef: Coef,
    pub factors: Vec<TrigFactor>,
    pub deltas: Vec<ShiftExpr>,
}

impl DistTerm {
    pub fn scalar(c: Complex64) -> Self {
        DistTerm { coef: Coef::Scalar(c), factors: vec![], deltas: vec![] }
    }

    pub fn new(coef: Coef, factors: Vec<TrigFactor>, deltas: Vec<ShiftExpr>) -> Self {
        DistTerm { coef, factors, deltas }
    }

    fn substitute(&self, var: &str, by: &ShiftExpr) -> Self {
        DistTerm {
            coef: self.coef.clone(),
            factors: self.factors.iter().map(|f| f.substitute(var, by)).collect(),
            deltas: self.deltas.iter().map(|d| d.substitute(var, by)).collect(),
        }
    }

    /// Delta normal form followed by factor canonicalization. `Ok(None)` when the
    /// term vanishes (a delta supported off every variable).
    fn canonical(&self) -> Result<Option<DistTerm>, TrigError> {
        let mut t = self.clone();
        let mut solved: Vec<(String, ShiftExpr)> = Vec::new();
        let mut pending: Vec<ShiftExpr> = t.deltas.clone();
        pending.reverse();
        while let Some(d) = pending.pop() {
            if d.is_constant() {
                if d.is_zero() {
                    return Err(TrigError::DegenerateDelta);
                }
                return Ok(None);
            }
            let var = d
                .vars()
                .filter(|(_, a)| a.abs() == 1)
                .map(|(v, _)| v.to_string())
                .min_by_key(|v| var_rank(v))
                .ok_or_else(|| TrigError::NonUnitDelta(d.to_string()))?;
            let by = d.solve_for(&var).expect("unit coefficient");
            for p in pending.iter_mut() {
                *p = p.substitute(&var, &by);
            }
            for (_, e) in solved.iter_mut() {
                *e = e.substitute(&var, &by);
            }
            t.factors = t.factors.iter().map(|f| f.substitute(&var, &by)).collect();
            solved.push((var, by));
        }
        let mut deltas: Vec<ShiftExpr> = solved.iter().map(|(v, e)| ShiftExpr::var(v).sub(e)).collect();
        deltas.sort();

        let mut sign = 1.0;
        let mut fs: Vec<TrigFactor> = Vec::new();
        for f in &t.factors {
            let (s, c) = f.canonical();
            sign *= s;
            fs.push(c);
        }
        let mut out: Vec<TrigFactor> = Vec::new();
        for f in fs {
            let partner = out.iter().position(|g| {
                g.period == f.period && g.arg == f.arg && g.bv == f.bv && g.exponent == -f.exponent
            });
            match partner {
                Some(k) => {
                    out.remove(k);
                }
                None => out.push(f),
            }
        }
        out.sort();
        Ok(Some(DistTerm { coef: t.coef.scale(Complex64::new(sign, 0.0)), factors: out, deltas }))
    }
}

fn var_rank(v: &str) -> (u8, String) {
    (u8::from(v.starts_with('z')), v.to_string())
}

/// A distribution-valued expression: finite sum of [`DistTerm`]s.
#[derive(Clone, Debug, PartialEq, Serialize, Default)]
pub struct DistExpr {
    pub terms: Vec<DistTerm>,
}

impl DistExpr {
    pub fn zero() -> Self {
        DistExpr { terms: vec![] }
    }

    pub fn one() -> Self {
        Self::term(DistTerm::scalar(Complex64::new(1.0, 0.0)))
    }

    pub fn term(t: DistTerm) -> Self {
        DistExpr { terms: vec![t] }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::term(DistTerm::scalar(c))
    }

    /// Single factor expression.
    pub fn factor(f: TrigFactor) -> Self {
        Self::term(DistTerm::new(Coef::one(), vec![f], vec![]))
    }

    pub fn add(&self, o: &DistExpr) -> DistExpr {
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        DistExpr { terms }
    }

    pub fn sub(&self, o: &DistExpr) -> DistExpr {
        self.add(&o.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: Complex64) -> DistExpr {
        DistExpr {
            terms: self
                .terms
                .iter()
                .map(|t| DistTerm { coef: t.coef.scale(s), ..t.clone() })
                .collect(),
        }
    }

    pub fn mul_coef(&self, c: &Coef) -> DistExpr {
        DistExpr {
            terms: self.terms.iter().map(|t| DistTerm { coef: t.coef.mul(c), ..t.clone() }).collect(),
        }
    }

    pub fn mul(&self, o: &DistExpr) -> DistExpr {
        let mut terms = Vec::new();
        for a in &self.terms {
            for b in &o.terms {
                let mut factors = a.factors.clone();
                factors.extend(b.factors.iter().cloned());
                let mut deltas = a.deltas.clone();
                deltas.extend(b.deltas.iter().cloned());
                terms.push(DistTerm { coef: a.coef.mul(&b.coef), factors, deltas });
            }
        }
        DistExpr { terms }
    }

    /// `[a, b] = ab - ba`.
    pub fn commutator(&self, o: &DistExpr) -> DistExpr {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn substitute(&self, var: &str, by: &ShiftExpr) -> DistExpr {
        DistExpr { terms: self.terms.iter().map(|t| t.substitute(var, by)).collect() }
    }

    /// Canonical form: delta normal form, canonical factors, merged signatures, zeros dropped.
    pub fn canonicalize(&self) -> Result<DistExpr, TrigError> {
        let mut merged: BTreeMap<(Vec<TrigFactor>, Vec<ShiftExpr>), Coef> = BTreeMap::new();
        for t in &self.terms {
            if let Some(c) = t.canonical()? {
                let key = (c.factors, c.deltas);
                let e = merged.entry(key).or_insert(Coef::Scalar(Complex64::new(0.0, 0.0)));
                *e = e.add(&c.coef);
            }
        }
        let terms = merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((factors, deltas), coef)| DistTerm { coef, factors, deltas })
            .collect();
        Ok(DistExpr { terms })
    }

    pub fn has_deltas(&self) -> bool {
        self.terms.iter().any(|t| !t.deltas.is_empty())
    }

    pub fn delta_free_part(&self) -> DistExpr {
        DistExpr { terms: self.terms.iter().filter(|t| t.deltas.is_empty()).cloned().collect() }
    }

    /// Terms with deltas grouped by their (canonical) support; the map values are delta-free.
    pub fn delta_groups(&self) -> BTreeMap<Vec<ShiftExpr>, DistExpr> {
        let mut g: BTreeMap<Vec<ShiftExpr>, DistExpr> = BTreeMap::new();
        for t in self.terms.iter().filter(|t| !t.deltas.is_empty()) {
            g.entry(t.deltas.clone())
                .or_default()
                .terms
                .push(DistTerm { coef: t.coef.clone(), factors: t.factors.clone(), deltas: vec![] });
        }
        g
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut s = BTreeSet::new();
        for t in &self.terms {
            for f in &t.factors {
                s.extend(f.arg.vars().map(|(v, _)| v.to_string()));
            }
            for d in &t.deltas {
                s.extend(d.vars().map(|(v, _)| v.to_string()));
            }
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.terms.iter().filter_map(|t| t.coef.dim()).max().unwrap_or(1)
    }

    /// Numeric value (a 1x1 matrix for scalar expressions).
    pub fn eval(&self, assign: &Assignment, params: &ParamTower, eps_pole: f64) -> Result<Mat, TrigError> {
        let dim = self.dim();
        let mut acc = Mat::zeros(dim, dim);
        for t in &self.terms {
            if !t.deltas.is_empty() {
                return Err(TrigError::DeltaPresent);
            }
            let mut v = Complex64::new(1.0, 0.0);
            for f in &t.factors {
                v *= f.eval(assign, params, eps_pole)?;
            }
            acc += t.coef.to_matrix(dim) * v;
        }
        Ok(acc)
    }

    pub fn eval_scalar(&self, assign: &Assignment, params: &ParamTower, eps_pole: f64) -> Result<Complex64, TrigError> {
        let m = self.eval(assign, params, eps_pole)?;
        Ok(m[(0, 0)])
    }

    /// Canonical JSON text.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}
