//! Complex log-Gamma, the contour primitives of the normal-ordering rule, and their
//! quadrature oracle.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::quad;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[derive(Debug, Error, PartialEq)]
pub enum SpecialError {
    #[error("principal branch needs Re(eta_p x) > 0, got {0}")]
    Branch(Complex64),
}

const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Principal branch of `ln Gamma(z)`: upward recurrence to `Re z >= 10`, then Stirling.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    let mut z = z;
    let mut acc = Complex64::new(0.0, 0.0);
    while z.re < 10.0 {
        acc -= z.ln();
        z += 1.0;
    }
    let z2 = z * z;
    let mut zk = z;
    let mut series = Complex64::new(0.0, 0.0);
    for c in STIRLING {
        series += c / zk;
        zk *= z2;
    }
    acc + (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + series
}

/// `int_C dl ln(-l)/(2 pi i l) e^{-x l} = -(gamma + ln x)`.
pub fn i0(x: Complex64) -> Complex64 {
    -(EULER_GAMMA + x.ln())
}

/// `int_C dl ln(-l)/(2 pi i l) e^{-x l}/(1 - e^{-l/eta_p})`.
pub fn master_integral(x: Complex64, eta_p: f64) -> Result<Complex64, SpecialError> {
    let y = x * eta_p;
    if y.re <= 0.0 {
        return Err(SpecialError::Branch(y));
    }
    Ok(master_continued(x, eta_p))
}

/// Same closed form without the branch guard (the recurrence continues `ln Gamma`).
pub fn master_continued(x: Complex64, eta_p: f64) -> Complex64 {
    let y = x * eta_p;
    ln_gamma(y) + (y - 0.5) * (EULER_GAMMA - eta_p.ln()) - 0.5 * (2.0 * PI).ln()
}

/// `int_C dl ln(-l)/(2 pi i) f(l)` on the contour wrapping the positive real axis:
/// the ray `[rho, inf)` plus the circle of radius `rho`, which must enclose no pole but 0.
pub fn hankel(f: impl Fn(Complex64) -> Complex64, rho: f64, tol: f64) -> Complex64 {
    let ray = quad::integrate_to_inf(|l| f(Complex64::new(l, 0.0)), rho, tol);
    let circle = quad::integrate(
        |th| {
            let z = Complex64::from_polar(rho, th);
            Complex64::new(rho.ln(), th - PI) * f(z) * Complex64::i() * z
        },
        0.0,
        2.0 * PI,
        tol,
    );
    ray + circle / Complex64::new(0.0, 2.0 * PI)
}

/// Quadrature value of `int_C dl ln(-l)/(2 pi i l) e^{-x l} / prod_k (1 - e^{-l/T_k})` for
/// `Re x > 0`, by fixed Gauss-Legendre panels on the circle and the truncated ray.
pub fn contour_primitive(x: Complex64, periods: &[f64]) -> Complex64 {
    let tmin = periods.iter().cloned().fold(f64::INFINITY, f64::min);
    let rho = if periods.is_empty() { 1.0 } else { 0.25 * PI * tmin };
    let f = |l: Complex64| {
        let mut d = l;
        for t in periods {
            d *= 1.0 - (-l / *t).exp();
        }
        (-x * l).exp() / d
    };
    let end = rho + 40.0 / x.re.max(0.5);
    let h = 0.5f64.min(1.0 / x.im.abs().max(1e-3)).min(0.5 * tmin.min(1.0));
    let ray = quad::gauss_panels(|l| f(Complex64::new(l, 0.0)), rho, end, h);
    let circle = quad::gauss_panels(
        |th| {
            let z = Complex64::from_polar(rho, th);
            Complex64::new(rho.ln(), th - PI) * f(z) * Complex64::i() * z
        },
        0.0,
        2.0 * PI,
        PI / 4.0,
    );
    ray + circle / Complex64::new(0.0, 2.0 * PI)
}

/// `G(x; T_1..T_n)`: closed forms for n <= 1, otherwise the shift recurrence
/// `G(x) = G(x + 1/T_1) + G(x; T_2..)` up to `Re x >= 2` and then quadrature.
pub fn primitive(x: Complex64, periods: &[f64]) -> Complex64 {
    primitive_from(x, periods, 2.0)
}

/// [`primitive`] with the recurrence carried up to `Re x >= re_min`.
pub fn primitive_from(x: Complex64, periods: &[f64], re_min: f64) -> Complex64 {
    match periods {
        [] => i0(x),
        [t] => master_continued(x, *t),
        [t1, rest @ ..] => {
            let mut x = x;
            let mut acc = Complex64::new(0.0, 0.0);
            while x.re < re_min {
                acc += primitive_from(x, rest, re_min);
                x += 1.0 / t1;
            }
            acc + contour_primitive(x, periods)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_values() {
        assert!(ln_gamma(Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert!((ln_gamma(Complex64::new(0.5, 0.0)).re - 0.5 * PI.ln()).abs() < 1e-14);
        assert!((ln_gamma(Complex64::new(5.0, 0.0)).re - 24f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn branch_guard() {
        assert!(master_integral(Complex64::new(-0.1, 0.3), 1.0).is_err());
    }
}
