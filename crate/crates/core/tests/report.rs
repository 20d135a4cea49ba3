use std::collections::BTreeSet;

use currentalg::report::{run, RunConfig, Suite, VariantSel};

fn paths(v: &serde_json::Value, prefix: String, out: &mut BTreeSet<String>) {
    match v {
        serde_json::Value::Object(m) => {
            for (k, x) in m {
                let p = format!("{prefix}.{k}");
                out.insert(p.clone());
                paths(x, p, out);
            }
        }
        serde_json::Value::Array(a) => {
            for x in a {
                paths(x, format!("{prefix}[]"), out);
            }
        }
        _ => {}
    }
}

fn quick(suites: &[Suite]) -> RunConfig {
    RunConfig { algebra: "A1".into(), samples: 4, suites: suites.to_vec(), ..RunConfig::default() }
}

#[test]
fn toml_config_with_defaults() {
    let c = RunConfig::from_toml("algebra = \"A3\"\nhbar = 0.2\nsuites = [\"evalrep\", \"liealg\"]\nvariant = \"normalized\"\n").unwrap();
    assert_eq!(c.algebra, "A3");
    assert_eq!(c.eta, 1.0);
    assert_eq!(c.variant, VariantSel::Normalized);
    assert_eq!(c.ordered_suites(), vec![Suite::Liealg, Suite::Evalrep]);
    assert!(RunConfig::from_toml("bogus = 1").is_err());
    assert!(RunConfig { levels: "1,x".into(), ..RunConfig::default() }.level_list().is_err());
}

#[test]
fn evalrep_alone_runs_without_boson() {
    let r = run(&quick(&[Suite::Evalrep])).unwrap();
    assert_eq!(r.suites.len(), 1);
    assert_eq!(r.suites[0].suite, "evalrep");
    assert!(r.pass, "{}", r.summary());
}

#[test]
fn zero_tolerance_fails_every_nontrivial_check() {
    let cfg = RunConfig { tol: 0.0, ..quick(&[Suite::Evalrep, Suite::Intertwine]) };
    let r = run(&cfg).unwrap();
    assert!(!r.pass);
    for s in &r.suites {
        for c in &s.checks {
            if c.max_residual > 0.0 && c.tol == 0.0 {
                assert!(!c.pass, "{}", c.id);
            }
        }
    }
}

#[test]
fn same_seed_same_bytes() {
    let cfg = quick(&[Suite::Structfn, Suite::Evalrep, Suite::Intertwine]);
    assert_eq!(run(&cfg).unwrap().to_json(), run(&cfg).unwrap().to_json());
    let other = RunConfig { seed: 9, ..cfg.clone() };
    assert_ne!(run(&cfg).unwrap().to_json(), run(&other).unwrap().to_json());
}

#[test]
fn report_schema_matches_golden() {
    let r = run(&quick(&Suite::ALL)).unwrap();
    let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    let mut p = BTreeSet::new();
    paths(&v, String::new(), &mut p);
    let got: Vec<_> = p.into_iter().collect();
    let golden = include_str!("golden/report_schema.txt");
    let want: Vec<_> = golden.lines().map(str::to_string).collect();
    assert_eq!(got, want);
}

#[test]
fn non_a_series_reports_module_errors() {
    let cfg = RunConfig { algebra: "D4".into(), samples: 2, suites: vec![Suite::Liealg, Suite::Evalrep], ..RunConfig::default() };
    let r = run(&cfg).unwrap();
    assert!(r.suites[0].error.is_none());
    assert!(r.suites[1].error.as_deref().unwrap().starts_with("evalrep:"));
    assert!(!r.pass);
    assert!(run(&RunConfig { algebra: "Q7".into(), ..RunConfig::default() }).is_err());
}
