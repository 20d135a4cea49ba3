//! Exact exponent functions `g(lambda)` built from a fixed atom catalog, and their
//! expansion into the contour primitives `G(x; T_1..T_n)`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::BosonError;
use crate::params::ParamTower;
use crate::special;

/// `q hbar + sum_p r_p / eta^(p)`, kept exact.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Scale {
    #[serde(serialize_with = "crate::ser::rat")]
    pub hbar: Rational64,
    #[serde(serialize_with = "crate::ser::rat_map")]
    pub inv_eta: BTreeMap<i32, Rational64>,
}

impl Scale {
    pub fn zero() -> Self {
        Scale::default()
    }

    pub fn hbar(q: Rational64) -> Self {
        Scale { hbar: q, inv_eta: BTreeMap::new() }
    }

    /// `r / eta^(p)`.
    pub fn inv_eta(p: i32, r: Rational64) -> Self {
        let mut s = Scale::zero();
        if !r.is_zero() {
            s.inv_eta.insert(p, r);
        }
        s
    }

    pub fn add(&self, o: &Scale) -> Scale {
        let mut s = self.clone();
        s.hbar += o.hbar;
        for (p, r) in &o.inv_eta {
            let e = s.inv_eta.entry(*p).or_insert_with(Rational64::zero);
            *e += r;
            if e.is_zero() {
                s.inv_eta.remove(p);
            }
        }
        s
    }

    pub fn mul(&self, k: Rational64) -> Scale {
        if k.is_zero() {
            return Scale::zero();
        }
        Scale {
            hbar: self.hbar * k,
            inv_eta: self.inv_eta.iter().map(|(p, r)| (*p, r * k)).collect(),
        }
    }

    pub fn neg(&self) -> Scale {
        self.mul(Rational64::from_integer(-1))
    }

    pub fn is_zero(&self) -> bool {
        self.hbar.is_zero() && self.inv_eta.is_empty()
    }

    pub fn value(&self, params: &ParamTower) -> Result<f64, BosonError> {
        let mut v = rf(self.hbar) * params.hbar;
        for (p, r) in &self.inv_eta {
            v += rf(*r) * params.inv_eta_at(*p)?;
        }
        Ok(v)
    }

    /// `Some(k)` when `self = k * other` with `k` a positive integer.
    pub fn integer_multiple_of(&self, other: &Scale) -> Option<i64> {
        if other.is_zero() {
            return None;
        }
        let k = if !other.hbar.is_zero() {
            self.hbar / other.hbar
        } else {
            let (p, r) = other.inv_eta.iter().next()?;
            *self.inv_eta.get(p)? / r
        };
        (k.is_integer() && k.is_positive() && &other.mul(k) == self).then(|| k.to_integer())
    }
}

fn rf(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Atom {
    /// `sh(a lambda)^n`.
    Sh { a: Scale, n: i32 },
    /// `(1 - e^{-t lambda})^m`.
    OneMinusExp { t: Scale, m: i32 },
}

/// `weight * e^{exp lambda} * prod atoms`; the spectral factor `e^{i lambda u}` is
/// carried by the argument of the current, not here.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentFn {
    pub weight: f64,
    pub exp: Scale,
    pub atoms: Vec<Atom>,
}

impl ExponentFn {
    pub fn constant(weight: f64) -> Self {
        ExponentFn { weight, exp: Scale::zero(), atoms: vec![] }
    }

    pub fn sh(a: Scale, n: i32) -> Self {
        ExponentFn { weight: 1.0, exp: Scale::zero(), atoms: vec![Atom::Sh { a, n }] }
    }

    pub fn exp(b: Scale) -> Self {
        ExponentFn { weight: 1.0, exp: b, atoms: vec![] }
    }

    /// `(1 - e^{sign t lambda})^m`.
    pub fn one_minus_exp(sign: i32, t: Scale, m: i32) -> Self {
        if sign < 0 {
            return ExponentFn { weight: 1.0, exp: Scale::zero(), atoms: vec![Atom::OneMinusExp { t, m }] };
        }
        ExponentFn {
            weight: if m % 2 == 0 { 1.0 } else { -1.0 },
            exp: t.mul(Rational64::from_integer(m as i64)),
            atoms: vec![Atom::OneMinusExp { t, m }],
        }
    }

    pub fn mul(&self, o: &ExponentFn) -> ExponentFn {
        let mut atoms = self.atoms.clone();
        atoms.extend(o.atoms.iter().cloned());
        ExponentFn { weight: self.weight * o.weight, exp: self.exp.add(&o.exp), atoms }
    }

    pub fn scale(&self, s: f64) -> ExponentFn {
        ExponentFn { weight: self.weight * s, ..self.clone() }
    }

    /// `lambda -> -lambda`, rewritten in the same atom catalog.
    pub fn reflect(&self) -> ExponentFn {
        let mut out = ExponentFn { weight: self.weight, exp: self.exp.neg(), atoms: vec![] };
        for a in &self.atoms {
            match a {
                Atom::Sh { a, n } => {
                    if n % 2 != 0 {
                        out.weight = -out.weight;
                    }
                    out.atoms.push(Atom::Sh { a: a.clone(), n: *n });
                }
                Atom::OneMinusExp { t, m } => {
                    out = out.mul(&ExponentFn::one_minus_exp(1, t.clone(), *m));
                }
            }
        }
        out
    }

    /// Pointwise value.
    pub fn eval(&self, l: Complex64, params: &ParamTower) -> Result<Complex64, BosonError> {
        let mut v = Complex64::new(self.weight, 0.0) * (l * self.exp.value(params)?).exp();
        for a in &self.atoms {
            v *= match a {
                Atom::Sh { a, n } => (l * a.value(params)?).sinh().powi(*n),
                Atom::OneMinusExp { t, m } => (1.0 - (-l * t.value(params)?).exp()).powi(*m),
            };
        }
        Ok(v)
    }

    /// Smallest modulus of a nonzero pole in the lambda plane.
    pub fn pole_radius(&self, params: &ParamTower) -> Result<f64, BosonError> {
        let mut r = f64::INFINITY;
        for a in &self.atoms {
            match a {
                Atom::Sh { a, n } if *n < 0 => r = r.min(std::f64::consts::PI / a.value(params)?.abs()),
                Atom::OneMinusExp { t, m } if *m < 0 => r = r.min(2.0 * std::f64::consts::PI / t.value(params)?.abs()),
                _ => {}
            }
        }
        Ok(r)
    }

    /// Rewrites `self / lambda` as `sum_s c_s e^{s lambda} / (lambda prod_k (1 - e^{-t_k lambda}))`.
    pub fn expand(&self, params: &ParamTower) -> Result<Expansion, BosonError> {
        let mut weight = self.weight;
        let mut shift = self.exp.clone();
        let mut pw: BTreeMap<Scale, i32> = BTreeMap::new();
        for a in &self.atoms {
            match a {
                Atom::Sh { a, n } => {
                    let v = a.value(params)?;
                    if a.is_zero() || v == 0.0 {
                        if *n > 0 {
                            return Ok(Expansion::default());
                        }
                        return Err(BosonError::Unsupported("reciprocal sh(0)".into()));
                    }
                    let a = if v < 0.0 {
                        if n % 2 != 0 {
                            weight = -weight;
                        }
                        a.neg()
                    } else {
                        a.clone()
                    };
                    weight *= 2f64.powi(-n);
                    shift = shift.add(&a.mul(Rational64::from_integer(*n as i64)));
                    *pw.entry(a.mul(Rational64::from_integer(2))).or_insert(0) += n;
                }
                Atom::OneMinusExp { t, m } => {
                    if t.value(params)? <= 0.0 {
                        return Err(BosonError::Unsupported("non-positive period".into()));
                    }
                    *pw.entry(t.clone()).or_insert(0) += m;
                }
            }
        }
        let mut poly: BTreeMap<Scale, f64> = BTreeMap::from([(Scale::zero(), weight)]);
        'cancel: loop {
            for (tn, &mn) in &pw {
                if mn <= 0 {
                    continue;
                }
                for (td, &md) in &pw {
                    if md >= 0 {
                        continue;
                    }
                    if let Some(k) = tn.integer_multiple_of(td) {
                        let (tn, td) = (tn.clone(), td.clone());
                        *pw.get_mut(&tn).unwrap() -= 1;
                        *pw.get_mut(&td).unwrap() += 1;
                        let geo = (0..k).map(|l| (td.mul(Rational64::from_integer(-l)), 1.0)).collect();
                        poly = poly_mul(&poly, &geo);
                        continue 'cancel;
                    }
                }
            }
            break;
        }
        let mut dens = Vec::new();
        for (t, m) in pw {
            if m > 0 {
                for _ in 0..m {
                    poly = poly_mul(&poly, &BTreeMap::from([(Scale::zero(), 1.0), (t.neg(), -1.0)]));
                }
            }
            for _ in m..0 {
                dens.push(t.clone());
            }
        }
        let terms = poly
            .into_iter()
            .filter(|(_, c)| *c != 0.0)
            .map(|(s, c)| (s.add(&shift), c))
            .collect();
        Ok(Expansion { terms, dens })
    }
}

fn poly_mul(a: &BTreeMap<Scale, f64>, b: &BTreeMap<Scale, f64>) -> BTreeMap<Scale, f64> {
    let mut r: BTreeMap<Scale, f64> = BTreeMap::new();
    for (sa, ca) in a {
        for (sb, cb) in b {
            *r.entry(sa.add(sb)).or_insert(0.0) += ca * cb;
        }
    }
    r.retain(|_, c| *c != 0.0);
    r
}

/// `sum_s c_s G(-s - i w; 1/t_1, .., 1/t_n)`.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Expansion {
    pub terms: BTreeMap<Scale, f64>,
    pub dens: Vec<Scale>,
}

/// A singular point of `exp(expansion)`: `w = at` with net order (positive = pole).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Singularity {
    pub at: Complex64,
    pub order: f64,
}

impl Expansion {
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, w: Complex64, params: &ParamTower) -> Result<Complex64, BosonError> {
        let periods = self.dens.iter().map(|t| Ok(1.0 / t.value(params)?)).collect::<Result<Vec<f64>, BosonError>>()?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (s, c) in &self.terms {
            let x = -s.value(params)? - Complex64::i() * w;
            acc += *c * special::primitive(x, &periods);
        }
        Ok(acc)
    }

    /// All coefficients integral, so `exp` of the value is branch-free.
    pub fn integral_weights(&self) -> bool {
        self.terms.values().all(|c| (c - c.round()).abs() < 1e-12)
    }

    /// Poles and zeros of `exp(self)` in `w` with `|Im w| <= bound` (zero or one period only).
    pub fn singularities(&self, params: &ParamTower, bound: f64) -> Result<Option<Vec<Singularity>>, BosonError> {
        if self.dens.len() > 1 {
            return Ok(None);
        }
        let period = match self.dens.first() {
            Some(t) => Some(1.0 / t.value(params)?),
            None => None,
        };
        let mut pts: Vec<Singularity> = Vec::new();
        let mut push = |at: Complex64, order: f64| match pts.iter_mut().find(|p| (p.at - at).norm() < 1e-9) {
            Some(p) => p.order += order,
            None => pts.push(Singularity { at, order }),
        };
        for (s, c) in &self.terms {
            let s = s.value(params)?;
            match period {
                // e^{c I0(x)} = e^{-c gamma} x^{-c}, x = -s - i w vanishes at w = i s.
                None => push(Complex64::new(0.0, s), *c),
                // Gamma(T x)^c has poles at T x = -n, i.e. w = i (s - n/T).
                Some(tp) => {
                    let mut n = 0.0;
                    loop {
                        let im = s - n / tp;
                        if im < -bound {
                            break;
                        }
                        if im <= bound {
                            push(Complex64::new(0.0, im), *c);
                        }
                        n += 1.0;
                    }
                }
            }
        }
        let mut pts: Vec<Singularity> = pts
            .into_iter()
            .filter(|p| p.order.abs() > 1e-12 && p.at.im.abs() <= bound)
            .collect();
        pts.sort_by(|a, b| a.at.im.total_cmp(&b.at.im));
        Ok(Some(pts))
    }
}
