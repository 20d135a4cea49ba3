use std::f64::consts::PI;

use num_complex::Complex64;

use currentalg::special::{contour_primitive, i0, ln_gamma, master_integral, primitive, EULER_GAMMA};

fn grid() -> Vec<f64> {
    (0..20).map(|k| 0.2 + 0.14 * (k as f64 + 0.5)).collect()
}

#[test]
fn master_closed_form_at_one_and_half() {
    for eta in [0.7, 1.0, 1.3] {
        let v = master_integral(Complex64::new(1.0 / eta, 0.0), eta).unwrap();
        let want = 0.5 * (EULER_GAMMA - f64::ln(eta)) - 0.5 * (2.0 * PI).ln();
        assert!((v - want).norm() < 1e-13);
        let v = master_integral(Complex64::new(0.5 / eta, 0.0), eta).unwrap();
        assert!((v - (0.5 * PI.ln() - 0.5 * (2.0 * PI).ln())).norm() < 1e-13);
    }
}

#[test]
fn master_against_quadrature() {
    for eta in [0.8, 1.25] {
        for y in grid() {
            let x = Complex64::new(y / eta, 0.0);
            let a = master_integral(x, eta).unwrap();
            let b = contour_primitive(x, &[eta]);
            assert!((a - b).norm() < 1e-6, "eta {eta} y {y}: {a} vs {b}");
        }
    }
}

#[test]
fn master_against_quadrature_off_axis() {
    let x = Complex64::new(0.9, 0.4);
    let a = master_integral(x, 1.1).unwrap();
    let b = contour_primitive(x, &[1.1]);
    assert!((a - b).norm() < 1e-8);
}

#[test]
fn i0_against_quadrature() {
    for x in [Complex64::new(0.3, 0.0), Complex64::new(1.7, -0.5)] {
        assert!((i0(x) - contour_primitive(x, &[])).norm() < 1e-8);
    }
}

#[test]
fn reflection_identity() {
    for x in grid() {
        let g = ln_gamma(Complex64::new(x, 0.0)).exp() * ln_gamma(Complex64::new(1.0 - x, 0.0)).exp();
        let v = g * (PI * x).sin() / PI;
        assert!((v - 1.0).norm() < 1e-10, "x {x}: {v}");
    }
}

#[test]
fn reflection_pairing_of_master() {
    let eta = 0.9;
    for y in [0.3, 0.45, 0.8] {
        let a = master_integral(Complex64::new(y / eta, 0.0), eta).unwrap();
        let b = master_integral(Complex64::new((1.0 - y) / eta, 0.0), eta).unwrap();
        let want = (PI / (PI * y).sin()).ln() - (2.0 * PI).ln();
        assert!((a + b - want).norm() < 1e-12);
    }
}

#[test]
fn two_period_recurrence_matches_quadrature() {
    let ts = [0.8, 1.0 / 1.55];
    for x in [Complex64::new(0.7, 0.2), Complex64::new(1.3, -0.1)] {
        let a = primitive(x, &ts);
        let b = contour_primitive(x, &ts);
        assert!((a - b).norm() < 1e-7, "{a} {b}");
    }
}
