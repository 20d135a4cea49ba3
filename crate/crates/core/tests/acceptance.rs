//! Acceptance gate: one line per criterion, nonzero exit if any fails.

use std::time::{Duration, Instant};

use currentalg::boson::{self, Engine, ZeroModeConvention};
use currentalg::check::Check;
use currentalg::evalrep::{self, EvalRep, FNorm};
use currentalg::hopf;
use currentalg::intertwine::{self, Variant};
use currentalg::liealg::{cartan, Series};
use currentalg::params::ParamTower;
use currentalg::report::{run, RunConfig};
use currentalg::structfn::{self, Ctx};
use currentalg::trigcalc::Sampler;
use num_rational::Rational64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const HBAR: f64 = 0.1;
const ETA: f64 = 1.0;

const EVAL_SAMPLES: usize = 50;
const EVAL_TOL_FREE: f64 = 1e-9;
const EVAL_TOL_DELTA: f64 = 1e-8;
const EVAL_BUDGET: Duration = Duration::from_secs(30);

const BOSON_SAMPLES: usize = 30;
const BOSON_TOL: f64 = 1e-8;
const BOSON_SERRE_TOL: f64 = 1e-7;
const BOSON_BUDGET: Duration = Duration::from_secs(120);

const MASTER_TOL: f64 = 1e-6;
const KERNEL_SAMPLES: usize = 100;
const KERNEL_TOL: f64 = 1e-12;

const AXIOM_TOL: f64 = 1e-9;
const K2_TOL: f64 = 1e-7;

const DEGEN_ETA: f64 = 1e-4;
const DEGEN_POINTS: usize = 20;
const DEGEN_TOL: f64 = 1e-3;

const DIAMOND_TOL: f64 = 1e-9;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn rng(k: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(1000 + k)
}

/// Fails on any hard failure; returns the number of counted checks and the worst residual.
fn gate(checks: &[Check]) -> Result<(usize, f64), String> {
    let hard: Vec<_> = checks.iter().filter(|c| c.hard_failure()).collect();
    if let Some(c) = hard.first() {
        return Err(format!("{} failing, first: {} ({:.3e} > {:.0e})", hard.len(), c.id, c.max_residual, c.tol));
    }
    let counted: Vec<_> = checks.iter().filter(|c| !c.informational).collect();
    Ok((counted.len(), counted.iter().map(|c| c.max_residual).fold(0.0, f64::max)))
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn criterion1() -> Outcome {
    let t = Instant::now();
    let mut checks = Vec::new();
    for r in 1..=3 {
        let p = ParamTower::with_levels(HBAR, ETA, &[0]).map_err(err)?;
        let rep = EvalRep::build(r, &p, FNorm::Balanced).map_err(err)?;
        let mut g = rng(r as u64);
        for c in evalrep::verify_all(&rep, EVAL_SAMPLES, &mut g, EVAL_TOL_FREE, EVAL_TOL_FREE).map_err(err)? {
            let delta = c.id.starts_with("[E_");
            let free = c.id.contains("[HH");
            if free && c.samples < EVAL_SAMPLES {
                return Err(format!("{} used {} samples", c.id, c.samples));
            }
            let tol = if delta { EVAL_TOL_DELTA } else { EVAL_TOL_FREE };
            checks.push(Check { pass: c.max_residual <= tol, tol, ..c });
        }
    }
    let (n, worst) = gate(&checks)?;
    let el = t.elapsed();
    if el > EVAL_BUDGET {
        return Err(format!("runtime {:.1}s over {}s", el.as_secs_f64(), EVAL_BUDGET.as_secs()));
    }
    Ok(format!("A1-A3, {n} relations, worst {worst:.2e}, {:.1}s", el.as_secs_f64()))
}

fn criterion2() -> Outcome {
    let t = Instant::now();
    let mut checks = Vec::new();
    for r in 1..=2 {
        let g = cartan(Series::A, r).map_err(err)?;
        let p = ParamTower::with_levels(HBAR, ETA, &[1]).map_err(err)?;
        let e = Engine::new(&p, &g, ZeroModeConvention::Cocycle, 1, 1e-12).map_err(err)?;
        let ctx = Ctx::base(&p);
        let s = Sampler::default();
        let mut rg = rng(10 + r as u64);
        for case in boson::exchange_cases(&g) {
            checks.push(boson::exchange_check(&e, &boson::level_one, &case, ctx, BOSON_SAMPLES, &s, &mut rg, BOSON_TOL).map_err(err)?);
        }
        for i in g.nodes() {
            let (c, poles) = boson::ef_audit(&e, &boson::level_one, i, Rational64::from_integer(1), BOSON_SAMPLES, &s, &mut rg, BOSON_TOL)
                .map_err(err)?;
            if poles.len() != 2 {
                return Err(format!("A{r} node {i}: {} net poles", poles.len()));
            }
            checks.extend(c);
        }
        checks.extend(boson::serre_checks(&e, &boson::level_one, ctx, BOSON_SAMPLES, &s, &mut rg, BOSON_SERRE_TOL).map_err(err)?);
    }
    let (n, worst) = gate(&checks)?;
    let el = t.elapsed();
    if el > BOSON_BUDGET {
        return Err(format!("runtime {:.1}s over {}s", el.as_secs_f64(), BOSON_BUDGET.as_secs()));
    }
    Ok(format!("A1-A2, {n} checks, worst {worst:.2e}, {:.1}s", el.as_secs_f64()))
}

fn criterion3() -> Outcome {
    let p = ParamTower::with_levels(HBAR, ETA, &[1]).map_err(err)?;
    let g = cartan(Series::A, 2).map_err(err)?;
    let mut checks = boson::analytic_oracle_checks(&p, MASTER_TOL).map_err(err)?;
    let ids = ["master formula vs contour quadrature", "Gamma reflection"];
    for id in ids {
        if !checks.iter().any(|c| c.id == id) {
            return Err(format!("missing {id}"));
        }
    }
    let k = boson::kernel_checks(&p, &g, KERNEL_SAMPLES, &mut rng(20), KERNEL_TOL).map_err(err)?;
    checks.extend(k);
    let (n, worst) = gate(&checks)?;
    Ok(format!("{n} oracles, worst {worst:.2e}"))
}

fn criterion4() -> Outcome {
    let mut checks = Vec::new();
    for r in 1..=2 {
        let p = ParamTower::with_levels(HBAR, ETA, &[0]).map_err(err)?;
        let rep = EvalRep::build(r, &p, FNorm::Balanced).map_err(err)?;
        checks.extend(hopf::verify_axioms(&rep, 0, 8, &mut rng(30 + r as u64), AXIOM_TOL).map_err(err)?);
        let g = cartan(Series::A, r).map_err(err)?;
        let h = hopf::verify_homomorphism(HBAR, ETA, &g, 30, &mut rng(40 + r as u64), K2_TOL, 1e-10).map_err(err)?;
        checks.extend(h.checks);
        checks.push(hopf::minus_plus_identity(r, -3..=3).map_err(err)?);
        checks.push(hopf::zero_level_collapse(r, -3..=3).map_err(err)?);
    }
    let (n, worst) = gate(&checks)?;
    Ok(format!("{n} checks, worst {worst:.2e}"))
}

fn criterion5() -> Outcome {
    let mut checks = Vec::new();
    for r in 1..=3 {
        let g = cartan(Series::A, r).map_err(err)?;
        checks.push(structfn::degeneration_check(&g, HBAR, DEGEN_ETA, DEGEN_POINTS, &mut rng(50 + r as u64), DEGEN_TOL).map_err(err)?);
        checks.push(evalrep::degeneration_check(r, HBAR, DEGEN_POINTS, &mut rng(60 + r as u64), DEGEN_TOL).map_err(err)?);
    }
    let (n, worst) = gate(&checks)?;
    Ok(format!("{n} checks at eta = {DEGEN_ETA:e}, worst {worst:.2e}"))
}

fn criterion6() -> Outcome {
    let cat = intertwine::catalog();
    let mut checks = intertwine::count_checks(&cat);
    let main = intertwine::level_one_params(HBAR, ETA).map_err(err)?;
    let mut triples = 0;
    for r in 1..=2 {
        checks.extend(intertwine::period_checks(&cat, r));
        for v in [Variant::AsPrinted, Variant::Normalized] {
            let (c, s) = intertwine::diamond_checks(&cat, v, r, &main, 10, &mut rng(70 + r as u64), DIAMOND_TOL).map_err(err)?;
            triples += s.iter().map(|s| s.triples).sum::<usize>();
            checks.extend(c);
        }
    }
    let (n, worst) = gate(&checks)?;
    let a = serde_json::to_string(&intertwine::variant_report(&cat, 2, &main).map_err(err)?).map_err(err)?;
    let b = serde_json::to_string(&intertwine::variant_report(&intertwine::catalog(), 2, &main).map_err(err)?).map_err(err)?;
    if a != b {
        return Err("variant report differs between runs".into());
    }
    Ok(format!("{n} checks, {triples} triples, worst {worst:.2e}, variant report stable"))
}

fn criterion7() -> Outcome {
    let cfg = RunConfig::default();
    let a = run(&cfg).map_err(err)?.to_json();
    let b = run(&cfg).map_err(err)?.to_json();
    if a != b {
        return Err("reports differ".into());
    }
    Ok(format!("{} bytes identical", a.len()))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("evaluation module relations", criterion1),
        ("boson contractions", criterion2),
        ("analytic-kernel oracles", criterion3),
        ("Hopf family axioms", criterion4),
        ("degeneration", criterion5),
        ("intertwiner catalog", criterion6),
        ("harness determinism", criterion7),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(msg) => println!("criterion {} PASS {name}: {msg}", k + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {} FAIL {name}: {msg}", k + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
