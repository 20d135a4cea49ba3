//! Run configuration, suite orchestration and the JSON / text report.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::Rational64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boson::{self, Engine, ZeroModeConvention};
use crate::check::{rel_diff, Check};
use crate::evalrep::{self, EvalRep, FNorm};
use crate::hopf;
use crate::intertwine::{self, Variant};
use crate::liealg::{CartanData, Series};
use crate::params::ParamTower;
use crate::ser::{parse_rational, rat_to_string};
use crate::structfn::{self, Ctx, Relation};
use crate::trigcalc::{plemelj_reduce, Assignment, Bv, DistExpr, DistTerm, Coef, Sampler, ShiftExpr, Strip, TrigFactor};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config: {0}")]
    Parse(String),
    #[error("config: unknown suite `{0}`")]
    Suite(String),
    #[error("config: bad level list `{0}`")]
    Levels(String),
    #[error("config: bad variant `{0}` (printed, normalized or both)")]
    Variant(String),
    #[error("config: {0}")]
    Algebra(#[from] crate::liealg::LieError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Liealg,
    Structfn,
    Evalrep,
    Boson,
    Hopf,
    Intertwine,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::Liealg, Suite::Structfn, Suite::Evalrep, Suite::Boson, Suite::Hopf, Suite::Intertwine];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Liealg => "liealg",
            Suite::Structfn => "structfn",
            Suite::Evalrep => "evalrep",
            Suite::Boson => "boson",
            Suite::Hopf => "hopf",
            Suite::Intertwine => "intertwine",
        }
    }
}

impl FromStr for Suite {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL.into_iter().find(|x| x.name() == s.trim()).ok_or_else(|| ConfigError::Suite(s.into()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VariantSel {
    Printed,
    Normalized,
    Both,
}

impl VariantSel {
    pub fn variants(self) -> Vec<Variant> {
        match self {
            VariantSel::Printed => vec![Variant::AsPrinted],
            VariantSel::Normalized => vec![Variant::Normalized],
            VariantSel::Both => vec![Variant::AsPrinted, Variant::Normalized],
        }
    }
}

impl FromStr for VariantSel {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "printed" | "as_printed" => Ok(VariantSel::Printed),
            "normalized" => Ok(VariantSel::Normalized),
            "both" => Ok(VariantSel::Both),
            o => Err(ConfigError::Variant(o.into())),
        }
    }
}

/// Flat configuration; every field has a default.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub algebra: String,
    pub hbar: f64,
    pub eta: f64,
    /// Comma-separated levels `c_0, c_1, ...`.
    pub levels: String,
    pub suites: Vec<Suite>,
    pub samples: usize,
    pub tol: f64,
    pub quad_tol: f64,
    pub seed: u64,
    pub variant: VariantSel,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            algebra: "A2".into(),
            hbar: 0.1,
            eta: 1.0,
            levels: "1".into(),
            suites: Suite::ALL.to_vec(),
            samples: 20,
            tol: 1e-8,
            quad_tol: 1e-6,
            seed: 0,
            variant: VariantSel::Both,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<RunConfig, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse(e.message().to_string()))
    }

    pub fn load(path: &Path) -> Result<RunConfig, ConfigError> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn cartan(&self) -> Result<CartanData, ConfigError> {
        Ok(self.algebra.parse()?)
    }

    pub fn level_list(&self) -> Result<Vec<Rational64>, ConfigError> {
        self.levels
            .split(',')
            .map(|s| parse_rational(s).ok_or_else(|| ConfigError::Levels(self.levels.clone())))
            .collect()
    }

    /// Suites in dependency order, without repeats.
    pub fn ordered_suites(&self) -> Vec<Suite> {
        let mut s = self.suites.clone();
        s.sort();
        s.dedup();
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub checks: Vec<Check>,
    pub extras: serde_json::Value,
}

impl SuiteReport {
    pub fn hard_failures(&self) -> usize {
        self.checks.iter().filter(|c| c.hard_failure()).count() + usize::from(self.error.is_some())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Totals {
    pub checks: usize,
    pub passed: usize,
    pub hard_failures: usize,
    pub informational_failures: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub config: RunConfig,
    pub suites: Vec<SuiteReport>,
    pub totals: Totals,
    pub pass: bool,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn summary(&self) -> String {
        let c = &self.config;
        let mut s = String::new();
        let _ = writeln!(
            s,
            "currentalg  algebra={} hbar={} eta={} levels={} samples={} tol={:e} seed={}",
            c.algebra, c.hbar, c.eta, c.levels, c.samples, c.tol, c.seed
        );
        for sr in &self.suites {
            let pass = sr.checks.iter().filter(|c| c.pass).count();
            let _ = writeln!(s, "\n[{}] {}/{} pass", sr.suite, pass, sr.checks.len());
            if let Some(e) = &sr.error {
                let _ = writeln!(s, "  ERROR {e}");
            }
            for ch in &sr.checks {
                let mark = match (ch.pass, ch.informational) {
                    (true, _) => "PASS",
                    (false, true) => "INFO",
                    (false, false) => "FAIL",
                };
                let _ = write!(s, "  {mark}  {:<56} {:>10.3e}  n={}", ch.id, ch.max_residual, ch.samples);
                if let Some(n) = &ch.note {
                    let _ = write!(s, "  ({n})");
                }
                s.push('\n');
            }
        }
        let t = &self.totals;
        let _ = writeln!(
            s,
            "\n{}: {} checks, {} passed, {} failed, {} informational",
            if self.pass { "PASS" } else { "FAIL" },
            t.checks,
            t.passed,
            t.hard_failures,
            t.informational_failures
        );
        s
    }
}

type SuiteOut = Result<(Vec<Check>, serde_json::Value), String>;

fn ctx_err<E: std::fmt::Display>(suite: &str) -> impl Fn(E) -> String + '_ {
    move |e| format!("{suite}: {e}")
}

fn series_a(cartan: &CartanData, suite: &str) -> Result<usize, String> {
    if cartan.series == Series::A {
        Ok(cartan.rank)
    } else {
        Err(format!("{suite}: the evaluation module is built for A_r only, got {}", cartan.tag()))
    }
}

fn liealg_suite(cfg: &RunConfig) -> SuiteOut {
    let g = cfg.cartan().map_err(ctx_err("liealg"))?;
    let n = g.rank;
    let sym = (1..=n).all(|i| (1..=n).all(|j| g.a(i, j) == g.a(j, i)));
    let shape = (1..=n).all(|i| (1..=n).all(|j| if i == j { g.a(i, j) == 2 } else { matches!(g.a(i, j), 0 | -1) }));
    let half = (1..=n).all(|i| (1..=n).all(|j| g.b(i, j) * 2 == Rational64::from_integer(g.a(i, j))));
    let edges = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).filter(|&(i, j)| g.a(i, j) == -1).count();
    Ok((
        vec![
            Check::structural(format!("{}: A symmetric", g.tag()), sym),
            Check::structural(format!("{}: A_ii = 2, A_ij in {{0, -1}}", g.tag()), shape),
            Check::structural(format!("{}: B = A/2", g.tag()), half),
            Check::structural(format!("{}: Dynkin diagram is a tree", g.tag()), edges + 1 == n),
        ],
        serde_json::to_value(&g).unwrap_or_default(),
    ))
}

/// Tower relation, canonicalization and the Plemelj weight.
fn foundation_checks(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Vec<Check>, String> {
    let levels = cfg.level_list().map_err(ctx_err("params"))?;
    let p = ParamTower::new(cfg.hbar, cfg.eta, &levels).map_err(ctx_err("params"))?;
    let mut out = Vec::new();
    let mut worst: f64 = 0.0;
    for (n, c) in p.levels() {
        let a = p.inv_eta_at(n + 1).map_err(ctx_err("params"))?;
        let b = p.inv_eta_at(n).map_err(ctx_err("params"))?;
        let cf = *c.numer() as f64 / *c.denom() as f64;
        worst = worst.max((a - b - cfg.hbar * cf).abs());
    }
    out.push(Check::new("params: 1/eta^(n+1) - 1/eta^(n) = hbar c_n", worst, levels.len(), 1e-12));
    let mut g = Check::structural("params: hbar eta generic", true).informational();
    if let Some((a, b)) = p.genericity_warning(12, 1e-9) {
        g = Check::structural("params: hbar eta generic", false)
            .informational()
            .with_note(format!("hbar eta = {a}/{b}; lattice coincidences possible"));
    }
    out.push(g);

    let x = ShiftExpr::var("x");
    let e = DistExpr::term(DistTerm::new(
        Coef::one(),
        vec![
            TrigFactor::num(0, x.add(&ShiftExpr::lattice(0, 1)).plus_ihbar(Rational64::new(1, 2))),
            TrigFactor::den(0, x.neg().add(&ShiftExpr::lattice(0, -2))),
        ],
        vec![],
    ));
    let canon = e.canonicalize().map_err(ctx_err("trigcalc"))?;
    let s = Sampler::default();
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.samples {
        let asg = s.assignment(&["x"], rng);
        let (Ok(a), Ok(b)) = (e.eval_scalar(&asg, &p, 1e-9), canon.eval_scalar(&asg, &p, 1e-9)) else { continue };
        worst = worst.max(rel_diff(a, b));
    }
    out.push(Check::new("trigcalc: canonicalization preserves values", worst, cfg.samples, 1e-12));

    let f = |bv| DistExpr::term(DistTerm::new(Coef::one(), vec![TrigFactor::den(0, x.clone()).with_bv(bv)], vec![]));
    let red = plemelj_reduce(&f(Bv::MinusI0).sub(&f(Bv::PlusI0)), "x", Strip::PRINCIPAL, &p).map_err(ctx_err("trigcalc"))?;
    let groups = red.delta_groups();
    let eta = p.eta_at(0).map_err(ctx_err("params"))?;
    let want = Complex64::new(0.0, 2.0 / eta);
    let got = groups
        .values()
        .next()
        .and_then(|g| g.eval_scalar(&Assignment::new(), &p, 1e-9).ok())
        .unwrap_or_default();
    let ok = groups.len() == 1 && red.delta_free_part().terms.is_empty();
    out.push(Check::new("trigcalc: 1/sh(x - i0) - 1/sh(x + i0) = (2i/eta) delta(x)", if ok { rel_diff(got, want) } else { 1.0 }, 1, 1e-12));
    Ok(out)
}

fn structfn_suite(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> SuiteOut {
    let g = cfg.cartan().map_err(ctx_err("structfn"))?;
    let mut checks = foundation_checks(cfg, rng)?;
    let p = ParamTower::with_levels(cfg.hbar, cfg.eta, &[1]).map_err(ctx_err("structfn"))?;
    let ctx = Ctx::base(&p);
    let s = Sampler::default();
    for rel in [Relation::EE, Relation::FF, Relation::HHsame] {
        let mut worst: f64 = 0.0;
        for _ in 0..cfg.samples {
            let w = s.draw(rng);
            let at = |v: Complex64| -> Assignment { [("w".to_string(), v)].into_iter().collect() };
            for i in g.nodes() {
                for j in g.nodes() {
                    let a = structfn::ratio(rel, i, j, &g, ctx).factors.eval_scalar(&at(w), &p, 1e-9);
                    let b = structfn::ratio(rel, j, i, &g, ctx).factors.eval_scalar(&at(-w), &p, 1e-9);
                    if let (Ok(a), Ok(b)) = (a, b) {
                        worst = worst.max((a * b - 1.0).norm());
                    }
                }
            }
        }
        checks.push(Check::new(format!("{} {}: R(w) R(-w) = 1", rel.id(), g.tag()), worst, cfg.samples, cfg.tol));
    }
    checks.push(structfn::degeneration_check(&g, cfg.hbar, 1e-4, 20, rng, 1e-3).map_err(ctx_err("structfn"))?);
    Ok((checks, serde_json::Value::Null))
}

fn evalrep_suite(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> SuiteOut {
    let g = cfg.cartan().map_err(ctx_err("evalrep"))?;
    let r = series_a(&g, "evalrep")?;
    let p = ParamTower::with_levels(cfg.hbar, cfg.eta, &[0]).map_err(ctx_err("evalrep"))?;
    let rep = EvalRep::build(r, &p, FNorm::Balanced).map_err(ctx_err("evalrep"))?;
    let mut checks = evalrep::verify_all(&rep, cfg.samples, rng, cfg.tol, cfg.tol).map_err(ctx_err("evalrep"))?;
    checks.push(evalrep::strip_check(&rep));
    checks.extend(evalrep::asymptotic_checks(&rep).map_err(ctx_err("evalrep"))?);
    checks.push(evalrep::degeneration_check(r, cfg.hbar, 20, rng, 1e-3).map_err(ctx_err("evalrep"))?);
    let extras = serde_json::json!({ "poles": evalrep::pole_inventory(&rep), "delta_weight": rep.k() });
    Ok((checks, extras))
}

fn boson_suite(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> SuiteOut {
    let g = cfg.cartan().map_err(ctx_err("boson"))?;
    let levels = cfg.level_list().map_err(ctx_err("boson"))?;
    if levels.first() != Some(&Rational64::from_integer(1)) {
        return Err(format!("boson: the free-boson realization is level one, got c_0 = {}", levels.first().map(rat_to_string).unwrap_or_default()));
    }
    let p = ParamTower::new(cfg.hbar, cfg.eta, &levels).map_err(ctx_err("boson"))?;
    let engine = Engine::new(&p, &g, ZeroModeConvention::Cocycle, 1, 1e-12).map_err(ctx_err("boson"))?;
    let ctx = Ctx::base(&p);
    let s = Sampler::default();
    let cur: boson::CurrentFn = &boson::level_one;
    let mut checks = Vec::new();
    for case in boson::exchange_cases(&g).iter().chain(boson::printed_hf_cases(&g).iter()) {
        checks.push(boson::exchange_check(&engine, cur, case, ctx, cfg.samples, &s, rng, cfg.tol).map_err(ctx_err("boson"))?);
    }
    let mut poles = Vec::new();
    for i in g.nodes() {
        let (c, pl) = boson::ef_audit(&engine, cur, i, Rational64::from_integer(1), cfg.samples.min(10), &s, rng, cfg.tol)
            .map_err(ctx_err("boson"))?;
        checks.extend(c);
        poles.push(serde_json::json!({ "node": i, "poles": pl }));
        checks.extend(boson::ef_closed_form_checks(&engine, i, rng, 1e-12).map_err(ctx_err("boson"))?);
    }
    checks.extend(boson::serre_checks(&engine, cur, ctx, cfg.samples, &s, rng, 10.0 * cfg.tol).map_err(ctx_err("boson"))?);
    checks.extend(boson::kernel_checks(&p, &g, 100, rng, 1e-12).map_err(ctx_err("boson"))?);
    checks.extend(boson::analytic_oracle_checks(&p, cfg.quad_tol).map_err(ctx_err("boson"))?);
    Ok((checks, serde_json::json!({ "ef_poles": poles })))
}

fn hopf_suite(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> SuiteOut {
    let g = cfg.cartan().map_err(ctx_err("hopf"))?;
    let r = series_a(&g, "hopf")?;
    let p = ParamTower::with_levels(cfg.hbar, cfg.eta, &[0]).map_err(ctx_err("hopf"))?;
    let rep = EvalRep::build(r, &p, FNorm::Balanced).map_err(ctx_err("hopf"))?;
    let mut checks = hopf::verify_axioms(&rep, 0, cfg.samples.min(8), rng, 10.0 * cfg.tol).map_err(ctx_err("hopf"))?;
    checks.push(hopf::minus_plus_identity(r, -2..=2).map_err(ctx_err("hopf"))?);
    checks.push(hopf::zero_level_collapse(r, -2..=2).map_err(ctx_err("hopf"))?);
    checks.push(hopf::coassociativity_report(r, 3).map_err(ctx_err("hopf"))?);
    let h = hopf::verify_homomorphism(cfg.hbar, cfg.eta, &g, cfg.samples, rng, 10.0 * cfg.tol, 1e-10).map_err(ctx_err("hopf"))?;
    checks.extend(h.checks);
    let poles: Vec<_> = h.poles.iter().map(|(i, e)| serde_json::json!({ "node": i, "pole": e })).collect();
    Ok((checks, serde_json::json!({ "k2_ef_poles": poles })))
}

fn intertwine_suite(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> SuiteOut {
    let g = cfg.cartan().map_err(ctx_err("intertwine"))?;
    let r = series_a(&g, "intertwine")?;
    let rep = intertwine::verify_suite(r, cfg.hbar, cfg.eta, &cfg.variant.variants(), cfg.samples, rng, cfg.tol.min(1e-9))
        .map_err(ctx_err("intertwine"))?;
    let extras = serde_json::json!({ "diamonds": rep.diamonds, "variants": rep.variants });
    Ok((rep.checks, extras))
}

fn run_suite(suite: Suite, cfg: &RunConfig) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(suite as u64));
    let out = match suite {
        Suite::Liealg => liealg_suite(cfg),
        Suite::Structfn => structfn_suite(cfg, &mut rng),
        Suite::Evalrep => evalrep_suite(cfg, &mut rng),
        Suite::Boson => boson_suite(cfg, &mut rng),
        Suite::Hopf => hopf_suite(cfg, &mut rng),
        Suite::Intertwine => intertwine_suite(cfg, &mut rng),
    };
    match out {
        Ok((checks, extras)) => SuiteReport { suite: suite.name().into(), error: None, checks, extras },
        Err(e) => SuiteReport { suite: suite.name().into(), error: Some(e), checks: vec![], extras: serde_json::Value::Null },
    }
}

/// Runs the selected suites (one thread each, own seeded stream) and aggregates in
/// dependency order.
pub fn run(cfg: &RunConfig) -> Result<Report, ConfigError> {
    cfg.cartan()?;
    cfg.level_list()?;
    let suites = cfg.ordered_suites();
    let reports: Vec<SuiteReport> = std::thread::scope(|s| {
        let handles: Vec<_> = suites.iter().map(|&x| s.spawn(move || run_suite(x, cfg))).collect();
        handles.into_iter().map(|h| h.join().expect("suite thread")).collect()
    });
    let checks: Vec<&Check> = reports.iter().flat_map(|r| r.checks.iter()).collect();
    let hard = reports.iter().map(SuiteReport::hard_failures).sum::<usize>();
    let totals = Totals {
        checks: checks.len(),
        passed: checks.iter().filter(|c| c.pass).count(),
        hard_failures: hard,
        informational_failures: checks.iter().filter(|c| !c.pass && c.informational).count(),
    };
    Ok(Report { config: cfg.clone(), pass: hard == 0, suites: reports, totals })
}
