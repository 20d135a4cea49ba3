//! Verification routines for bosonized currents: exchange relations, the `[E, F]` pole
//! audit, Serre combinations, and the analytic-kernel oracles.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Rational64;
use rand::Rng;
use serde::Serialize;

use super::engine::{key_label, substitute_key, BosonExpr, Engine, Key};
use super::expfn::{ExponentFn, Scale};
use super::kernel::{kernel_value, payload, Kind};
use super::BosonError;
use crate::check::{rel_diff, Check};
use crate::liealg::{adjacent_pairs, CartanData};
use crate::params::ParamTower;
use crate::special;
use crate::structfn::{self, Ctx, Relation, Side, Sign};
use crate::trigcalc::{Assignment, Sampler, ShiftExpr, TrigError};

/// Builds the current `X_node(arg)` of some realization.
pub type CurrentFn<'a> = &'a dyn Fn(Kind, usize, &ShiftExpr) -> BosonExpr;

/// `X_i(u) Y_j(v) = R(u - v) Y_j(v) X_i(u)`; `relation = None` means `R = 1`.
#[derive(Clone, Debug, Serialize)]
pub struct ExchangeCase {
    pub x: Kind,
    pub i: usize,
    pub y: Kind,
    pub j: usize,
    pub relation: Option<Relation>,
}

impl ExchangeCase {
    pub fn id(&self) -> String {
        let rel = self.relation.map(|r| r.id()).unwrap_or_else(|| "commute".into());
        format!("{}_{} {}_{} [{}]", self.x.label(), self.i, self.y.label(), self.j, rel)
    }
}

/// Every delta-free ordered pair with its structure function.
pub fn exchange_cases(cartan: &CartanData) -> Vec<ExchangeCase> {
    let mut out = Vec::new();
    let table = [
        (Kind::Hp, Kind::Hm, Relation::HHpm),
        (Kind::Hp, Kind::Hp, Relation::HHsame),
        (Kind::Hm, Kind::Hm, Relation::HHsame),
        (Kind::Hp, Kind::E, Relation::HE(Sign::Plus)),
        (Kind::Hm, Kind::E, Relation::HE(Sign::Minus)),
        (Kind::Hp, Kind::F, Relation::HF(Sign::Plus)),
        (Kind::Hm, Kind::F, Relation::HF(Sign::Minus)),
        (Kind::E, Kind::E, Relation::EE),
        (Kind::F, Kind::F, Relation::FF),
    ];
    for i in cartan.nodes() {
        for j in cartan.nodes() {
            for (x, y, rel) in table {
                out.push(ExchangeCase { x, i, y, j, relation: Some(rel) });
            }
            if i != j {
                out.push(ExchangeCase { x: Kind::E, i, y: Kind::F, j, relation: None });
            }
        }
    }
    out
}

/// The `H F` relation in its printed form (reported, expected to fail).
pub fn printed_hf_cases(cartan: &CartanData) -> Vec<ExchangeCase> {
    let mut out = Vec::new();
    for i in cartan.nodes() {
        for j in cartan.nodes() {
            for (x, s) in [(Kind::Hp, Sign::Plus), (Kind::Hm, Sign::Minus)] {
                out.push(ExchangeCase { x, i, y: Kind::F, j, relation: Some(Relation::HFPrinted(s)) });
            }
        }
    }
    out
}

fn var(name: &str) -> ShiftExpr {
    ShiftExpr::var(name)
}

fn finite(m: &BTreeMap<Key, Complex64>) -> bool {
    m.values().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Sampled comparison of `X(u) Y(v)` with `R(u - v) Y(v) X(u)`, monomial by monomial.
#[allow(clippy::too_many_arguments)]
pub fn exchange_check<R: Rng>(
    engine: &Engine,
    current: CurrentFn,
    case: &ExchangeCase,
    ctx: Ctx,
    samples: usize,
    sampler: &Sampler,
    rng: &mut R,
    tol: f64,
) -> Result<Check, BosonError> {
    let (u, v) = (var("u"), var("v"));
    let lhs = current(case.x, case.i, &u).mul(&current(case.y, case.j, &v));
    let rhs = current(case.y, case.j, &v).mul(&current(case.x, case.i, &u));
    let ratio = case.relation.map(|r| structfn::ratio(r, case.i, case.j, &engine.cartan, ctx));
    let mut worst: f64 = 0.0;
    let (mut used, mut skipped) = (0, 0);
    while used < samples {
        if skipped > 10 * samples + 50 {
            return Err(BosonError::SamplingExhausted);
        }
        let asg = sampler.assignment(&["u", "v"], rng);
        let w = asg["u"] - asg["v"];
        let r = match &ratio {
            None => Complex64::new(1.0, 0.0),
            Some(rt) => {
                let wa: Assignment = [("w".to_string(), w)].into_iter().collect();
                match rt.factors.eval_scalar(&wa, &engine.params, 1e-6) {
                    Ok(x) => x,
                    Err(TrigError::PoleProximity { .. }) => {
                        skipped += 1;
                        continue;
                    }
                    Err(e) => return Err(e.into()),
                }
            }
        };
        let a = engine.eval(&lhs, &asg)?;
        let b = engine.eval(&rhs, &asg)?;
        if !finite(&a) || !finite(&b) {
            skipped += 1;
            continue;
        }
        let keys: BTreeSet<&Key> = a.keys().chain(b.keys()).collect();
        let zero = Complex64::new(0.0, 0.0);
        for k in keys {
            let x = a.get(k).copied().unwrap_or(zero);
            let y = r * b.get(k).copied().unwrap_or(zero);
            worst = worst.max(rel_diff(x, y));
        }
        used += 1;
    }
    let mut c = Check::new(case.id(), worst, used, tol);
    if matches!(case.relation, Some(Relation::HFPrinted(_))) {
        c = c.informational();
    }
    Ok(c)
}

/// `(1/2 pi i) oint f` per monomial on a circle of radius `r` around `u - v = w0`.
pub fn residues(engine: &Engine, expr: &BosonExpr, v0: Complex64, w0: Complex64, r: f64) -> Result<BTreeMap<Key, Complex64>, BosonError> {
    let n = 16;
    let mut acc: BTreeMap<Key, Complex64> = BTreeMap::new();
    for k in 0..n {
        let e = Complex64::from_polar(1.0, 2.0 * PI * (k as f64 + 0.5) / n as f64);
        let asg: Assignment = [("u".to_string(), v0 + w0 + e * r), ("v".to_string(), v0)].into_iter().collect();
        for (key, val) in engine.eval(expr, &asg)? {
            *acc.entry(key).or_insert(Complex64::new(0.0, 0.0)) += val * e * r / n as f64;
        }
    }
    Ok(acc)
}

/// Residues at `w0 = q i hbar`, keys rewritten at `u = v + w0` and `E F` pairs merged.
fn merged_residues(engine: &Engine, expr: &BosonExpr, v0: Complex64, q: Rational64, r: f64) -> Result<BTreeMap<Key, Complex64>, BosonError> {
    let w0 = Complex64::new(0.0, engine.params.hbar * (*q.numer() as f64 / *q.denom() as f64));
    let by = var("v").plus_ihbar(q);
    let mut out: BTreeMap<Key, Complex64> = BTreeMap::new();
    for (k, val) in residues(engine, expr, v0, w0, r)? {
        let k = engine.merge(&substitute_key(&k, "u", &by))?;
        *out.entry(k).or_insert(Complex64::new(0.0, 0.0)) += val;
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct PoleEntry {
    /// Pole position as a multiple of `i hbar`.
    pub at: String,
    pub monomial: String,
    pub residue: [f64; 2],
}

/// Pole/residue audit of `[E_i(u), F_i(v)]` at total level `c`: `E F` and `F E` agree off
/// the poles, and on the grid `w in (i hbar/4) Z` the only net residues sit at
/// `w = +-i hbar c/2` with monomial `H+-_i` and residue `+-i/hbar` (delta weight `+-2 pi/hbar`).
#[allow(clippy::too_many_arguments)]
pub fn ef_audit<R: Rng>(
    engine: &Engine,
    current: CurrentFn,
    i: usize,
    c: Rational64,
    samples: usize,
    sampler: &Sampler,
    rng: &mut R,
    tol: f64,
) -> Result<(Vec<Check>, Vec<PoleEntry>), BosonError> {
    let (u, v) = (var("u"), var("v"));
    let ef = current(Kind::E, i, &u).mul(&current(Kind::F, i, &v));
    let fe = current(Kind::F, i, &v).mul(&current(Kind::E, i, &u));
    let mut checks = Vec::new();

    let mut worst: f64 = 0.0;
    let mut used = 0;
    while used < samples {
        let asg = sampler.assignment(&["u", "v"], rng);
        let a = engine.eval(&ef, &asg)?;
        let b = engine.eval(&fe, &asg)?;
        let keys: BTreeSet<&Key> = a.keys().chain(b.keys()).collect();
        let zero = Complex64::new(0.0, 0.0);
        for k in keys {
            worst = worst.max(rel_diff(a.get(k).copied().unwrap_or(zero), b.get(k).copied().unwrap_or(zero)));
        }
        used += 1;
    }
    checks.push(Check::new(format!("E_{i} F_{i} = F_{i} E_{i} off the poles"), worst, used, tol));

    let hbar = engine.params.hbar;
    let v0 = Complex64::new(0.137, 0.011);
    let r = hbar / 40.0;
    let inv_eta = engine.params.inv_eta_at(0)?;
    let m_max = ((0.5 * inv_eta) / (hbar / 4.0)).floor() as i64;
    let scale = hbar;
    let mut worst: f64 = 0.0;
    let mut poles = Vec::new();
    let zero = Complex64::new(0.0, 0.0);
    for m in -m_max..=m_max {
        let q = Rational64::new(m, 4);
        let got = merged_residues(engine, &ef, v0, q, r)?;
        let mut want: BTreeMap<Key, Complex64> = BTreeMap::new();
        let (hq, res) = if q == c / 2 {
            (Some((Kind::Hp, c / 4)), Complex64::new(0.0, 1.0 / hbar))
        } else if q == -c / 2 {
            (Some((Kind::Hm, -c / 4)), Complex64::new(0.0, -1.0 / hbar))
        } else {
            (None, zero)
        };
        if let Some((kind, shift)) = hq {
            let h = current(kind, i, &var("v").plus_ihbar(shift));
            let asg: Assignment = [("v".to_string(), v0)].into_iter().collect();
            for (k, val) in engine.eval(&h, &asg)? {
                *want.entry(k).or_insert(zero) += res * val;
            }
        }
        let keys: BTreeSet<&Key> = got.keys().chain(want.keys()).collect();
        for k in keys {
            let g = got.get(k).copied().unwrap_or(zero);
            let wv = want.get(k).copied().unwrap_or(zero);
            worst = worst.max((g - wv).norm() * scale);
            if g.norm() * scale > 1e-6 {
                poles.push(PoleEntry {
                    at: crate::ser::rat_to_string(&q),
                    monomial: key_label(k),
                    residue: [g.re, g.im],
                });
            }
        }
    }
    checks.push(
        Check::new(format!("[E_{i}, F_{i}] residues on the (i hbar/4) grid"), worst, (2 * m_max + 1) as usize, tol)
            .with_note(format!("|Im w| <= {:.4}, poles found: {}", m_max as f64 * hbar / 4.0, poles.len())),
    );
    Ok((checks, poles))
}

/// Level-one extras: closed-form pole inventory of the `E F` contraction and the payload
/// identities behind `H+- = e^{-2 gamma} :E(u +- i hbar/4) F(u -+ i hbar/4):`.
pub fn ef_closed_form_checks<R: Rng>(engine: &Engine, i: usize, rng: &mut R, tol: f64) -> Result<Vec<Check>, BosonError> {
    let p = &engine.params;
    let mut out = Vec::new();
    let c = engine.contraction(0, Kind::E, i, Kind::F, i);
    let pts = match &c.expansion {
        Some(e) => e.singularities(p, 0.5 * p.inv_eta_at(0)?)?,
        None => None,
    };
    let ok = match pts {
        Some(pts) => {
            let poles: Vec<_> = pts.iter().filter(|s| s.order > 0.0).collect();
            poles.len() == 2
                && poles.iter().all(|s| (s.order - 1.0).abs() < 1e-12 && (s.at.im.abs() - p.hbar / 2.0).abs() < 1e-12)
        }
        None => false,
    };
    out.push(Check::structural(format!("E_{i} F_{i} contraction: simple poles at +-i hbar/2 only"), ok));

    let q = |x: i64| Scale::hbar(Rational64::new(x, 4));
    let ge = payload(Kind::E, 0);
    let gf = payload(Kind::F, 0);
    let plus = ge.mul(&ExponentFn::exp(q(-1)));
    let plus_f = gf.mul(&ExponentFn::exp(q(1)));
    let minus = ge.mul(&ExponentFn::exp(q(1)));
    let minus_f = gf.mul(&ExponentFn::exp(q(-1)));
    let (hp, hm) = (payload(Kind::Hp, 0), payload(Kind::Hm, 0));
    let mut worst: f64 = 0.0;
    let n = 40;
    for _ in 0..n {
        let l = Complex64::new(rng.gen_range(-4.0..4.0), rng.gen_range(-0.5..0.5));
        let a = plus.eval(l, p)? + plus_f.eval(l, p)?;
        let b = minus.eval(l, p)? + minus_f.eval(l, p)?;
        worst = worst.max(rel_diff(a, hp.eval(l, p)?)).max(rel_diff(b, hm.eval(l, p)?));
    }
    out.push(Check::new("merged E F payload equals the H+- payload", worst, n, tol));
    Ok(out)
}

/// `X_i(u1) X_i(u2) X_j(v) - k X_i(u1) X_j(v) X_i(u2) + X_j(v) X_i(u1) X_i(u2) + (u1 <-> u2)`.
#[allow(clippy::too_many_arguments)]
pub fn serre_check<R: Rng>(
    engine: &Engine,
    current: CurrentFn,
    side: Side,
    i: usize,
    j: usize,
    ctx: Ctx,
    samples: usize,
    sampler: &Sampler,
    rng: &mut R,
    tol: f64,
) -> Result<Check, BosonError> {
    let kind = match side {
        Side::E => Kind::E,
        Side::F => Kind::F,
    };
    let k = structfn::serre_coefficient(&engine.params, ctx, side)?;
    let x = |n: usize, a: &str| current(kind, n, &var(a));
    let mut words: Vec<(f64, BosonExpr)> = Vec::new();
    for (a, b) in [("u1", "u2"), ("u2", "u1")] {
        words.push((1.0, BosonExpr::product(&[x(i, a), x(i, b), x(j, "v")])));
        words.push((-k, BosonExpr::product(&[x(i, a), x(j, "v"), x(i, b)])));
        words.push((1.0, BosonExpr::product(&[x(j, "v"), x(i, a), x(i, b)])));
    }
    let mut worst: f64 = 0.0;
    let mut used = 0;
    let mut skipped = 0;
    while used < samples {
        if skipped > 10 * samples + 50 {
            return Err(BosonError::SamplingExhausted);
        }
        let asg = sampler.assignment(&["u1", "u2", "v"], rng);
        let mut sum: BTreeMap<Key, Complex64> = BTreeMap::new();
        let mut size: BTreeMap<Key, f64> = BTreeMap::new();
        let mut ok = true;
        for (wgt, e) in &words {
            let m = engine.eval(e, &asg)?;
            ok &= finite(&m);
            for (key, val) in m {
                let t = val * *wgt;
                *sum.entry(key.clone()).or_insert(Complex64::new(0.0, 0.0)) += t;
                let s = size.entry(key).or_insert(0.0);
                *s = s.max(t.norm());
            }
        }
        if !ok {
            skipped += 1;
            continue;
        }
        for (key, s) in &sum {
            let d = size[key];
            if d > 0.0 {
                worst = worst.max(s.norm() / d);
            }
        }
        used += 1;
    }
    let label = match side {
        Side::E => "E",
        Side::F => "F",
    };
    Ok(Check::new(format!("Serre {label}_{i}{label}_{i}{label}_{j}"), worst, used, tol))
}

/// Serre checks for every adjacent pair and both sides.
#[allow(clippy::too_many_arguments)]
pub fn serre_checks<R: Rng>(
    engine: &Engine,
    current: CurrentFn,
    ctx: Ctx,
    samples: usize,
    sampler: &Sampler,
    rng: &mut R,
    tol: f64,
) -> Result<Vec<Check>, BosonError> {
    let mut out = Vec::new();
    for (i, j) in adjacent_pairs(&engine.cartan) {
        for side in [Side::E, Side::F] {
            out.push(serre_check(engine, current, side, i, j, ctx, samples, sampler, rng, tol)?);
        }
    }
    Ok(out)
}

/// `alpha_ij(l) = -alpha_ij(-l)` and `alpha_ij = alpha_ji` (both kernels), plus the small-`l`
/// slope `alpha_ij(l)/l -> 2 hbar^2 B_ij eta'/eta`.
pub fn kernel_checks<R: Rng>(params: &ParamTower, cartan: &CartanData, samples: usize, rng: &mut R, tol: f64) -> Result<Vec<Check>, BosonError> {
    let mut anti: f64 = 0.0;
    let mut sym: f64 = 0.0;
    for _ in 0..samples {
        let l = Complex64::new(rng.gen_range(0.05..6.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 }, rng.gen_range(-0.2..0.2));
        for i in cartan.nodes() {
            for j in cartan.nodes() {
                for primed in [false, true] {
                    let a = kernel_value(cartan.b(i, j), 0, primed, l, params)?;
                    let m = kernel_value(cartan.b(i, j), 0, primed, -l, params)?;
                    let t = kernel_value(cartan.b(j, i), 0, primed, l, params)?;
                    let s = a.norm().max(1e-300);
                    if a.norm() > 0.0 {
                        anti = anti.max((a + m).norm() / s);
                        sym = sym.max((a - t).norm() / s);
                    }
                }
            }
        }
    }
    let mut slope: f64 = 0.0;
    let ratio = params.eta_at(1)? / params.eta_at(0)?;
    for i in cartan.nodes() {
        for j in cartan.nodes() {
            let b = cartan.b(i, j);
            let bf = *b.numer() as f64 / *b.denom() as f64;
            let l = 1e-4;
            let got = kernel_value(b, 0, false, Complex64::new(l, 0.0), params)? / l;
            let want = 2.0 * params.hbar * params.hbar * bf * ratio;
            slope = slope.max((got.re - want).abs() / want.abs().max(1e-300) * if bf == 0.0 { 0.0 } else { 1.0 });
        }
    }
    Ok(vec![
        Check::new("kernel antisymmetry alpha(l) = -alpha(-l)", anti, samples, tol),
        Check::new("kernel symmetry alpha_ij = alpha_ji", sym, samples, tol),
        Check::new("kernel slope alpha(l)/l at l -> 0", slope, 1, 1e-6),
    ])
}

/// Master closed form against contour quadrature on 20 points of `eta_p x in [0.2, 3]`, for
/// `eta_p in {eta, eta'}`, and the reflection identity on the same grid.
pub fn analytic_oracle_checks(params: &ParamTower, quad_tol: f64) -> Result<Vec<Check>, BosonError> {
    let grid: Vec<f64> = (0..20).map(|k| 0.2 + 0.14 * (k as f64 + 0.5)).collect();
    let mut master: f64 = 0.0;
    for p in [0, 1] {
        let eta = params.eta_at(p)?;
        for &y in &grid {
            let x = Complex64::new(y / eta, 0.0);
            let a = special::master_integral(x, eta).map_err(|e| BosonError::Unsupported(e.to_string()))?;
            let b = special::contour_primitive(x, &[eta]);
            master = master.max((a - b).norm());
        }
    }
    let mut refl: f64 = 0.0;
    for &y in &grid {
        let g = special::ln_gamma(Complex64::new(y, 0.0)).exp() * special::ln_gamma(Complex64::new(1.0 - y, 0.0)).exp();
        refl = refl.max((g * (PI * y).sin() / PI - 1.0).norm());
    }
    Ok(vec![
        Check::new("master formula vs contour quadrature", master, 2 * grid.len(), quad_tol),
        Check::new("Gamma reflection", refl, grid.len(), 1e-10),
    ])
}
