use currentalg::intertwine::*;
use currentalg::trigcalc::Assignment;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(11)
}

#[test]
fn catalog_matches_golden_file() {
    let golden = include_str!("golden/intertwine_catalog.json");
    assert_eq!(export_catalog().trim(), golden.trim());
}

#[test]
fn counts_and_periods() {
    let cat = catalog();
    assert_eq!(cat.len(), 44);
    for c in count_checks(&cat).iter().chain(period_checks(&cat, 3).iter()) {
        assert!(c.pass, "{}", c.id);
    }
}

#[test]
fn phi_h_plus_coefficient_at_a_point() {
    let cat = catalog();
    let e = cat.iter().find(|e| e.id == "Phi H+ same").unwrap();
    let main = level_one_params(0.3, 0.7).unwrap();
    let (r, j) = (2, 1);
    let (u, z) = (Complex64::new(0.37, 0.05), Complex64::new(-0.2, 0.0));
    let asg: Assignment = [("u".to_string(), u), ("z".to_string(), z)].into_iter().collect();
    let got = e.ratio_expr(r, j).unwrap().eval_scalar(&asg, &main, 1e-9).unwrap();
    let etap = 1.0 / (1.0 / 0.7 + 0.3);
    let ih = Complex64::new(0.0, 0.3);
    let pi = std::f64::consts::PI;
    let sh = |x: Complex64| (pi * etap * x).sinh();
    let num = sh(u - z - ih * ((r - j) as f64 - 2.0) / 2.0 - ih * 0.75);
    let den = sh(u - z - ih * (r - j) as f64 / 2.0 - ih * 0.75);
    assert!((got - num / den).norm() < 1e-13);
}

#[test]
fn psi_f_delta_weight() {
    let cat = catalog();
    let e = cat.iter().find(|e| e.id == "Psi F commutator").unwrap();
    let w = e.delta_weight(0.7, 0.3);
    let pi = std::f64::consts::PI;
    assert!((w - Complex64::new(0.0, (pi * 0.7 * 0.3).sin() / (pi * 0.7))).norm() < 1e-15);
    let d = e.delta.as_ref().unwrap();
    assert_eq!(d.kronecker, Some(0));
    assert_eq!(d.vertex, Index::l(-1));
    assert!(d.h_first);
}

#[test]
fn coefficients_follow_from_the_coproduct() {
    let cat = catalog();
    let main = level_one_params(0.3, 0.7).unwrap();
    let mut rng = rng();
    for r in 1..=2 {
        for v in [Variant::AsPrinted, Variant::Normalized] {
            for c in derivation_checks(&cat, v, r, &main, 6, &mut rng, 1e-10).unwrap() {
                assert!(c.pass, "{} {}", c.id, c.max_residual);
            }
        }
    }
}

#[test]
fn delta_terms_only_normalized_reading_agrees() {
    let cat = catalog();
    let main = level_one_params(0.3, 0.7).unwrap();
    let (checks, cmp) = delta_checks(&cat, Variant::Normalized, 2, &main).unwrap();
    assert!(checks.iter().all(|c| c.pass));
    let w = cmp[0].weight_ratio;
    assert!((w - Complex64::new(0.0, 1.0 / (2.0 * std::f64::consts::PI))).norm() < 1e-12);
    let (checks, _) = delta_checks(&cat, Variant::AsPrinted, 2, &main).unwrap();
    let failing: Vec<_> = checks.iter().filter(|c| !c.pass).collect();
    assert_eq!(failing.len(), 4);
    assert!(failing.iter().all(|c| c.informational && c.id.ends_with("/printed")));
}

#[test]
fn diamonds_a1_a2() {
    let cat = catalog();
    let main = level_one_params(0.3, 0.7).unwrap();
    let mut rng = rng();
    for r in 1..=2 {
        for v in [Variant::AsPrinted, Variant::Normalized] {
            let (checks, sums) = diamond_checks(&cat, v, r, &main, 5, &mut rng, 1e-9).unwrap();
            for c in &checks {
                assert!(c.pass, "{} {}", c.id, c.max_residual);
            }
            assert!(sums.iter().all(|s| s.triples > 0 && s.skipped_vertex_delta > 0));
        }
    }
}

#[test]
fn degeneration_to_rational() {
    let cat = catalog();
    let mut rng = rng();
    for c in degeneration_checks(&cat, 2, 0.3, 10, &mut rng, 1e-6).unwrap() {
        assert!(c.pass, "{} {}", c.id, c.max_residual);
    }
}

#[test]
fn variant_report_is_deterministic() {
    let main = level_one_params(0.1, 1.0).unwrap();
    let a = serde_json::to_string(&variant_report(&catalog(), 2, &main).unwrap()).unwrap();
    let b = serde_json::to_string(&variant_report(&catalog(), 2, &main).unwrap()).unwrap();
    assert_eq!(a, b);
    let rep = variant_report(&catalog(), 2, &main).unwrap();
    assert_eq!(rep.entries.len(), 4);
    assert!(rep.normalized_consistent && !rep.as_printed_consistent);
}
