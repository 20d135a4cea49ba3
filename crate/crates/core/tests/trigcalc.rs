use std::f64::consts::PI;

use currentalg::params::ParamTower;
use currentalg::trigcalc::*;
use num_complex::Complex64;
use num_rational::Rational64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn tower() -> ParamTower {
    ParamTower::with_levels(0.1, 1.0, &[0]).unwrap()
}

fn asg(pairs: &[(&str, Complex64)]) -> Assignment {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

// sinh(a + ib) written out, independent of Complex::sinh
fn sinh_ref(z: Complex64) -> Complex64 {
    c(z.re.sinh() * z.im.cos(), z.re.cosh() * z.im.sin())
}

#[test]
fn identical_factors_cancel() {
    let w = ShiftExpr::diff("u", "v");
    let e = DistExpr::factor(TrigFactor::num(0, w.clone())).mul(&DistExpr::factor(TrigFactor::den(0, w)));
    let e = e.canonicalize().unwrap();
    assert_eq!(e, DistExpr::one());
    let v = e.eval(&asg(&[("u", c(0.3, 0.1)), ("v", c(-0.2, 0.0))]), &tower(), 1e-6).unwrap();
    assert_eq!(v[(0, 0)], c(1.0, 0.0));
}

#[test]
fn reciprocal_factor_value() {
    let f = TrigFactor::den(0, ShiftExpr::diff("u", "v").plus_ihbar(Rational64::from_integer(-1)));
    let v = DistExpr::factor(f)
        .eval_scalar(&asg(&[("u", c(0.5, 0.0)), ("v", c(0.0, 0.0))]), &tower(), 1e-6)
        .unwrap();
    let oracle = c(1.0, 0.0) / sinh_ref(c(PI * 0.5, -PI * 0.1));
    assert!((v - oracle).norm() < 1e-14);
}

#[test]
fn half_period_flip() {
    let x = ShiftExpr::var("x");
    let shifted = DistExpr::factor(TrigFactor::num(0, x.add(&ShiftExpr::lattice(0, -1))));
    let minus = DistExpr::factor(TrigFactor::num(0, x)).scale(c(-1.0, 0.0));
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let rep = equal_numeric(&shifted, &minus, &EqConfig::default(), &tower(), &mut rng).unwrap();
    assert!(rep.pass && rep.max_residual < 1e-13);
    // and canonical forms coincide exactly
    assert_eq!(shifted.canonicalize().unwrap(), minus.canonicalize().unwrap());
}

#[test]
fn pole_proximity_and_unassigned() {
    let f = DistExpr::factor(TrigFactor::den(0, ShiftExpr::diff("u", "v")));
    let e = f.eval(&asg(&[("u", c(0.1, 0.0)), ("v", c(0.1, 0.0))]), &tower(), 1e-6);
    assert!(matches!(e, Err(TrigError::PoleProximity { .. })));
    let e = f.eval(&asg(&[("u", c(0.1, 0.0))]), &tower(), 1e-6);
    assert_eq!(e, Err(TrigError::Unassigned("v".into())));
}

fn bv_pair(eta_p: i32) -> DistExpr {
    let w = ShiftExpr::var("w");
    let lo = DistExpr::factor(TrigFactor::den(eta_p, w.clone()).with_bv(Bv::MinusI0));
    let hi = DistExpr::factor(TrigFactor::den(eta_p, w).with_bv(Bv::PlusI0));
    lo.sub(&hi)
}

#[test]
fn plemelj_gives_two_i_over_eta() {
    let p = ParamTower::with_levels(0.1, 0.7, &[0]).unwrap();
    let r = plemelj_reduce(&bv_pair(0), "w", Strip::PRINCIPAL, &p).unwrap();
    assert_eq!(r.terms.len(), 1);
    assert_eq!(r.terms[0].deltas, vec![ShiftExpr::var("w")]);
    let k = match &r.terms[0].coef {
        Coef::Scalar(z) => *z,
        _ => panic!(),
    };
    assert!((k - c(0.0, 2.0 / 0.7)).norm() < 1e-14);
}

// Smearing oracle: integrate the two boundary values against a Gaussian along the lines
// Im w = -eps and Im w = +eps inside the strip; the difference must equal the delta weight.
#[test]
fn plemelj_matches_smeared_boundary_values() {
    let eta = 0.7;
    let p = ParamTower::with_levels(0.1, eta, &[0]).unwrap();
    let r = plemelj_reduce(&bv_pair(0), "w", Strip::PRINCIPAL, &p).unwrap();
    let weight = match &r.terms[0].coef {
        Coef::Scalar(z) => *z,
        _ => panic!(),
    };
    let g = |z: Complex64| (-(z - 0.2) * (z - 0.2)).exp();
    let f = |z: Complex64| c(1.0, 0.0) / (z * PI * eta).sinh();
    let eps = 0.3 / eta;
    let line = |s: f64| currentalg::quad::integrate(|x| f(c(x, s)) * g(c(x, s)), -12.0, 12.0, 1e-12);
    let smeared = line(-eps) - line(eps);
    let expected = weight * g(c(0.0, 0.0));
    assert!((smeared - expected).norm() < 1e-6, "{smeared} vs {expected}");
}

#[test]
fn plemelj_preconditions() {
    let e = DistExpr::factor(TrigFactor::den(0, ShiftExpr::var("w")));
    assert_eq!(plemelj_reduce(&e, "w", Strip::PRINCIPAL, &tower()).unwrap(), e.canonicalize().unwrap());
    let w = ShiftExpr::var("w");
    let lo = DistExpr::term(DistTerm::new(Coef::unit(2, 0, 1), vec![TrigFactor::den(0, w.clone()).with_bv(Bv::MinusI0)], vec![]));
    let hi = DistExpr::term(DistTerm::new(Coef::unit(2, 1, 0), vec![TrigFactor::den(0, w).with_bv(Bv::PlusI0)], vec![]));
    assert_eq!(plemelj_reduce(&lo.sub(&hi), "w", Strip::PRINCIPAL, &tower()), Err(TrigError::MismatchedPair));
}

#[test]
fn plemelj_other_strip_flips_sign() {
    let r0 = plemelj_reduce(&bv_pair(0), "w", Strip::PRINCIPAL, &tower()).unwrap();
    let r1 = plemelj_reduce(&bv_pair(0), "w", Strip { k: 1 }, &tower()).unwrap();
    assert_eq!(r1.terms[0].coef, r0.terms[0].coef.scale(c(-1.0, 0.0)));
    assert_eq!(r1.terms[0].deltas, vec![ShiftExpr::var("w").sub(&ShiftExpr::lattice(0, 1))]);
}

#[test]
fn residue_simple() {
    let p = ParamTower::with_levels(0.1, 0.8, &[0]).unwrap();
    let e = DistExpr::factor(TrigFactor::den(0, ShiftExpr::diff("u", "z")));
    let r = residue(&e, "u", &ShiftExpr::var("z"), &p).unwrap();
    let v = r.eval_scalar(&Assignment::new(), &p, 1e-6).unwrap();
    assert!((v - c(1.0 / (PI * 0.8), 0.0)).norm() < 1e-15);
}

// numeric circle integral oracle for f(u)/sh(pi eta (u - z))
#[test]
fn residue_with_cofactor_matches_circle() {
    let p = ParamTower::with_levels(0.13, 0.8, &[0]).unwrap();
    let num = TrigFactor::num(0, ShiftExpr::diff("u", "z").plus_ihbar(Rational64::new(1, 2)));
    let den2 = TrigFactor::den(0, ShiftExpr::diff("u", "z").plus_ihbar(Rational64::new(-3, 2)));
    let pole = TrigFactor::den(0, ShiftExpr::diff("u", "z"));
    let e = DistExpr::term(DistTerm::new(Coef::Scalar(c(0.3, -1.1)), vec![num, den2, pole], vec![]));
    let r = residue(&e, "u", &ShiftExpr::var("z"), &p).unwrap();
    let z = c(0.4, -0.05);
    let got = r.eval_scalar(&asg(&[("z", z)]), &p, 1e-9).unwrap();
    let n = 64;
    let rad = 0.05;
    let mut acc = c(0.0, 0.0);
    for k in 0..n {
        let th = 2.0 * PI * k as f64 / n as f64;
        let d = c(rad * th.cos(), rad * th.sin());
        let val = e.eval_scalar(&asg(&[("u", z + d), ("z", z)]), &p, 1e-9).unwrap();
        acc += val * d / n as f64;
    }
    assert!((got - acc).norm() < 1e-8, "{got} vs {acc}");
}

#[test]
fn residue_errors() {
    let p = tower();
    let e = DistExpr::factor(TrigFactor::den(0, ShiftExpr::diff("u", "z")));
    let off = ShiftExpr::var("z").plus_ihbar(Rational64::new(1, 3));
    assert_eq!(residue(&e, "u", &off, &p), Err(TrigError::NotAPole));
    let sq = e.mul(&e);
    assert_eq!(residue(&sq, "u", &ShiftExpr::var("z"), &p), Err(TrigError::HigherOrder));
}

#[test]
fn structural_equality_is_exact() {
    let e = DistExpr::factor(TrigFactor::num(0, ShiftExpr::diff("u", "v").plus_ihbar(Rational64::new(1, 4))));
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let r = equal_numeric(&e, &e.clone(), &EqConfig::default(), &tower(), &mut rng).unwrap();
    assert_eq!(r.max_residual, 0.0);
    assert!(r.pass);
}

#[test]
fn delta_normal_form_merges_supports() {
    // delta(u - v) delta(u - z - a) == delta(u - z - a) delta(v - z - a)
    let a = ShiftExpr::ihbar(Rational64::new(1, 2));
    let s1 = vec![ShiftExpr::diff("u", "v"), ShiftExpr::diff("u", "z").sub(&a)];
    let s2 = vec![ShiftExpr::diff("v", "z").sub(&a), ShiftExpr::diff("u", "z").sub(&a)];
    let e1 = DistExpr::term(DistTerm::new(Coef::one(), vec![], s1)).canonicalize().unwrap();
    let e2 = DistExpr::term(DistTerm::new(Coef::one(), vec![], s2)).canonicalize().unwrap();
    assert_eq!(e1, e2);
}

#[test]
fn canonical_json_golden() {
    let f = TrigFactor::den(1, ShiftExpr::diff("u", "v").plus_ihbar(Rational64::new(-1, 2)));
    let e = DistExpr::factor(f).canonicalize().unwrap();
    let golden = r#"{"terms":[{"coef":{"scalar":[1.0,0.0]},"factors":[{"period":1,"arg":{"vars":{"u":1,"v":-1},"q":"-1/2","lattice":{},"t":"0"},"exponent":-1,"bv":"None"}],"deltas":[]}]}"#;
    assert_eq!(e.to_json(), golden);
}

proptest! {
    #[test]
    fn flip_invariant(re in -2.0f64..2.0, im in -0.4f64..0.4, q in -4i64..4, k in -3i64..3) {
        let p = tower();
        let arg = ShiftExpr::var("x").plus_ihbar(Rational64::new(q, 2));
        let f = TrigFactor::den(0, arg.add(&ShiftExpr::lattice(0, k)));
        let g = TrigFactor::den(0, arg);
        let a = asg(&[("x", c(re, im))]);
        let lhs = DistExpr::factor(f).eval_scalar(&a, &p, 1e-9);
        let rhs = DistExpr::factor(g).eval_scalar(&a, &p, 1e-9);
        if let (Ok(x), Ok(y)) = (lhs, rhs) {
            let s = if k % 2 == 0 { 1.0 } else { -1.0 };
            prop_assert!((x - y * s).norm() <= 1e-9 * y.norm().max(1.0));
        }
    }

    #[test]
    fn product_evaluates_to_product(re in -2.0f64..2.0, im in -0.3f64..0.3, q1 in -3i64..3, q2 in -3i64..3) {
        let p = tower();
        let a = DistExpr::factor(TrigFactor::num(0, ShiftExpr::var("x").plus_ihbar(Rational64::from_integer(q1))));
        let b = DistExpr::factor(TrigFactor::den(0, ShiftExpr::var("x").plus_ihbar(Rational64::new(q2, 3))));
        let s = asg(&[("x", c(re, im))]);
        if let (Ok(x), Ok(y)) = (a.eval_scalar(&s, &p, 1e-6), b.eval_scalar(&s, &p, 1e-6)) {
            let xy = a.mul(&b).canonicalize().unwrap().eval_scalar(&s, &p, 1e-6).unwrap();
            prop_assert!((xy - x * y).norm() <= 1e-10 * (x * y).norm().max(1.0));
        }
    }
}
