//! Heisenberg kernel, current payloads, and the normal-ordering contraction.

use num_complex::Complex64;
use num_rational::Rational64;
use serde::Serialize;

use super::expfn::{Expansion, ExponentFn, Scale};
use super::BosonError;
use crate::params::ParamTower;
use crate::special;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Kind {
    E,
    F,
    Hp,
    Hm,
}

impl Kind {
    pub const ALL: [Kind; 4] = [Kind::E, Kind::F, Kind::Hp, Kind::Hm];

    pub fn label(self) -> &'static str {
        match self {
            Kind::E => "E",
            Kind::F => "F",
            Kind::Hp => "H+",
            Kind::Hm => "H-",
        }
    }

    /// Power of `e^gamma` in front of the current.
    pub fn gamma_power(self) -> i32 {
        match self {
            Kind::E | Kind::F => 1,
            Kind::Hp | Kind::Hm => 0,
        }
    }

    /// Zero-mode content `exp(2 pi i s Q_j) exp(s P_j)`.
    pub fn zero_mode_sign(self) -> i64 {
        match self {
            Kind::E => 1,
            Kind::F => -1,
            Kind::Hp | Kind::Hm => 0,
        }
    }
}

fn half() -> Rational64 {
    Rational64::new(1, 2)
}

/// `lambda * alpha_ij(lambda)` for the Heisenberg algebra with periods `(eta^(s), eta^(s+1))`;
/// `primed` swaps the last ratio (the kernel of `a'`).
pub fn kernel(b: Rational64, slot: i32, primed: bool) -> ExponentFn {
    let (num, den) = if primed { (slot + 1, slot) } else { (slot, slot + 1) };
    ExponentFn::constant(4.0)
        .mul(&ExponentFn::sh(Scale::hbar(half()), 1))
        .mul(&ExponentFn::sh(Scale::hbar(b), 1))
        .mul(&ExponentFn::sh(Scale::inv_eta(num, half()), 1))
        .mul(&ExponentFn::sh(Scale::inv_eta(den, half()), -1))
}

/// `alpha_ij(lambda)` pointwise.
pub fn kernel_value(b: Rational64, slot: i32, primed: bool, l: Complex64, params: &ParamTower) -> Result<Complex64, BosonError> {
    Ok(kernel(b, slot, primed).eval(l, params)? / l)
}

/// Multiplier of `e^{i lambda u} a_j(lambda)` in the exponent of each current.
pub fn payload(kind: Kind, slot: i32) -> ExponentFn {
    let sh_h = ExponentFn::sh(Scale::hbar(half()), -1);
    let inv_eta = Scale::inv_eta(slot, Rational64::from_integer(1));
    match kind {
        Kind::E => ExponentFn::constant(0.5)
            .mul(&ExponentFn::sh(Scale::inv_eta(slot + 1, half()), 1))
            .mul(&sh_h)
            .mul(&ExponentFn::sh(Scale::inv_eta(slot, half()), -1)),
        Kind::F => ExponentFn::constant(-0.5).mul(&sh_h),
        Kind::Hp => ExponentFn::constant(-1.0)
            .mul(&ExponentFn::exp(Scale::hbar(Rational64::new(-1, 4))))
            .mul(&ExponentFn::one_minus_exp(1, inv_eta, -1)),
        Kind::Hm => ExponentFn::exp(Scale::hbar(Rational64::new(1, 4))).mul(&ExponentFn::one_minus_exp(-1, inv_eta, -1)),
    }
}

/// `int_C dl ln(-l)/(2 pi i) alpha(l) g1(l) g2(-l) e^{i l w}` as a function of `w`.
#[derive(Clone, Debug, Serialize)]
pub struct Contraction {
    /// `lambda * alpha * g1(lambda) * g2(-lambda)`.
    pub integrand: ExponentFn,
    /// Closed form (analytic continuation in `w`); `None` when the integrand does not
    /// reduce to the primitives.
    pub expansion: Option<Expansion>,
}

impl Contraction {
    pub fn new(g1: &ExponentFn, g2: &ExponentFn, kernel: &ExponentFn, params: &ParamTower) -> Self {
        let integrand = kernel.mul(g1).mul(&g2.reflect());
        let expansion = integrand.expand(params).ok();
        Contraction { integrand, expansion }
    }

    pub fn eval(&self, w: Complex64, params: &ParamTower, tol: f64) -> Result<Complex64, BosonError> {
        match &self.expansion {
            Some(e) => e.eval(w, params),
            None => quadrature_exponent(&self.integrand, w, params, tol),
        }
    }
}

/// The contraction exponent of `g1` (left) against `g2` (right) through `kernel`.
pub fn contraction_exponent(
    g1: &ExponentFn,
    g2: &ExponentFn,
    kernel: &ExponentFn,
    w: Complex64,
    params: &ParamTower,
    tol: f64,
) -> Result<Complex64, BosonError> {
    Contraction::new(g1, g2, kernel, params).eval(w, params, tol)
}

/// Direct quadrature on the contour wrapping the positive real axis; converges only for
/// `Im w` large enough that the integrand decays along the ray.
pub fn quadrature_exponent(integrand: &ExponentFn, w: Complex64, params: &ParamTower, tol: f64) -> Result<Complex64, BosonError> {
    let f = |l: Complex64| integrand.eval(l, params).map(|v| v * (Complex64::i() * l * w).exp() / l);
    let far = 400.0;
    let tail = f(Complex64::new(far, 0.0))?;
    let decayed = tail.norm() * far < 1e-10;
    if !decayed {
        return Err(BosonError::Unsupported("contour integral diverges".into()));
    }
    let rho = 0.25 * integrand.pole_radius(params)?.min(8.0);
    Ok(special::hankel(|l| f(l).unwrap_or(Complex64::new(f64::NAN, 0.0)), rho, tol))
}

/// A linear functional `int dl g(l) e^{i l at} a_node(l)` in slot `slot`.
#[derive(Clone, Debug, Serialize)]
pub struct Field {
    pub g: ExponentFn,
    pub node: usize,
    pub at: Complex64,
}

/// Two-point Fock pairing of `left` (from the left vacuum) with `right`.
pub fn pairing(
    left: &Field,
    right: &Field,
    b: Rational64,
    slot: i32,
    params: &ParamTower,
    tol: f64,
) -> Result<Complex64, BosonError> {
    contraction_exponent(&left.g, &right.g, &kernel(b, slot, false), left.at - right.at, params, tol)
}

/// Vacuum pairing of the ordered product of linear fields by the Wick theorem.
pub fn wick(pair: &dyn Fn(usize, usize) -> Result<Complex64, BosonError>, n: usize) -> Result<Complex64, BosonError> {
    fn go(
        rest: &[usize],
        pair: &dyn Fn(usize, usize) -> Result<Complex64, BosonError>,
    ) -> Result<Complex64, BosonError> {
        if rest.is_empty() {
            return Ok(Complex64::new(1.0, 0.0));
        }
        if rest.len() % 2 == 1 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let a = rest[0];
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 1..rest.len() {
            let mut others: Vec<usize> = rest[1..].to_vec();
            let b = others.remove(k - 1);
            acc += pair(a, b)? * go(&others, pair)?;
        }
        Ok(acc)
    }
    go(&(0..n).collect::<Vec<_>>(), pair)
}
