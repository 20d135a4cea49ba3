//! Complex-valued quadrature on top of the double-exponential rule, with
//! bisection wherever the rule's own error estimate is above target.

use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;

const MAX_DEPTH: u32 = 18;

fn de(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64, tol: f64) -> (Complex64, f64) {
    let re = quadrature::integrate(|x| f(x).re, a, b, tol);
    let im = quadrature::integrate(|x| f(x).im, a, b, tol);
    (
        Complex64::new(re.integral, im.integral),
        re.error_estimate.abs() + im.error_estimate.abs(),
    )
}

fn adapt(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64, tol: f64, depth: u32) -> Complex64 {
    let (v, err) = de(f, a, b, tol);
    if err <= tol.max(4.0 * f64::EPSILON * v.norm()) || depth >= MAX_DEPTH {
        return v;
    }
    let m = 0.5 * (a + b);
    adapt(f, a, m, 0.5 * tol, depth + 1) + adapt(f, m, b, 0.5 * tol, depth + 1)
}

/// `int_a^b f(x) dx` to absolute accuracy about `tol`.
pub fn integrate(f: impl Fn(f64) -> Complex64, a: f64, b: f64, tol: f64) -> Complex64 {
    adapt(&f, a, b, tol, 0)
}

/// `int_a^inf f(x) dx` through `x = a + s/(1-s)`; `f` must decay at infinity.
pub fn integrate_to_inf(f: impl Fn(f64) -> Complex64, a: f64, tol: f64) -> Complex64 {
    let g = |s: f64| {
        if s >= 1.0 {
            return Complex64::new(0.0, 0.0);
        }
        let d = 1.0 - s;
        let v = f(a + s / d) / (d * d);
        if v.re.is_finite() && v.im.is_finite() {
            v
        } else {
            Complex64::new(0.0, 0.0)
        }
    };
    adapt(&g, 0.0, 1.0, tol, 0)
}

fn legendre() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(24.try_into().expect("nonzero")).as_node_weight_pairs().to_vec())
}

/// Composite 24-point Gauss-Legendre on `[a, b]` with panels no wider than `h`.
pub fn gauss_panels(f: impl Fn(f64) -> Complex64, a: f64, b: f64, h: f64) -> Complex64 {
    let n = ((b - a) / h).ceil().max(1.0) as usize;
    let w = (b - a) / n as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let (lo, hi) = (a + w * k as f64, a + w * (k + 1) as f64);
        let (m, r) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        let mut s = Complex64::new(0.0, 0.0);
        for (x, wt) in legendre() {
            s += f(m + r * x) * *wt;
        }
        acc += s * r;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_and_exponential() {
        let g = integrate(|x| Complex64::new((-(x - 0.2) * (x - 0.2)).exp(), 0.0), -12.0, 12.0, 1e-13);
        assert!((g.re - std::f64::consts::PI.sqrt()).abs() < 1e-12);
        let e = integrate_to_inf(|x| Complex64::new(0.0, (-2.0 * x).exp()), 0.5, 1e-13);
        assert!((e.im - 0.5 * (-1.0f64).exp()).abs() < 1e-12);
        let o = gauss_panels(|x| Complex64::new(0.0, 3.0 * x).exp(), 0.0, 10.0, 0.5);
        let want = (Complex64::new(0.0, 30.0).exp() - 1.0) / Complex64::new(0.0, 3.0);
        assert!((o - want).norm() < 1e-14);
    }
}
