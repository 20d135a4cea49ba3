use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::ToPrimitive;
use rand::Rng;
use serde::Serialize;

use super::expr::*;
use super::HopfError;
use crate::boson::{
    ef_audit, exchange_cases, exchange_check, serre_checks, BosonExpr, Engine, Kind, PoleEntry, ZeroModeConvention,
};
use crate::check::Check;
use crate::liealg::CartanData;
use crate::params::ParamTower;
use crate::structfn::Ctx;
use crate::trigcalc::{Sampler, ShiftExpr};

/// Order of the iterated coproduct: `(Delta (x) id) Delta` or `(id (x) Delta) Delta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Iteration {
    Left,
    Right,
}

fn split(x: &CurrentExpr, slot: usize, c_left: i64, c_right: i64) -> Result<CurrentExpr, HopfError> {
    let t = x.tags[slot];
    let y = apply_coproduct(x, slot, PM::Plus)?;
    let levels: BTreeMap<i32, Rational64> = [(t, Rational64::from_integer(c_left)), (t + 1, Rational64::from_integer(c_right))].into();
    y.resolve(&|n| levels.get(&n).copied())
}

fn iterate(x: CurrentExpr, slot: usize, k: usize, it: Iteration) -> Result<CurrentExpr, HopfError> {
    if k <= 1 {
        return Ok(x);
    }
    let rest = k as i64 - 1;
    match it {
        Iteration::Left => iterate(split(&x, slot, rest, 1)?, slot, k - 1, it),
        Iteration::Right => iterate(split(&x, slot, 1, rest)?, slot + 1, k - 1, it),
    }
}

/// Image of `X_node(base)` at level `k`: iterated `Delta+_0` down to `k` level-one slots,
/// slot `s` belonging to `A_{hbar, eta^(s)}` with `c_s = 1`.
pub fn level_k_image(gen: Gen, node: usize, base: &ShiftExpr, k: usize, it: Iteration) -> Result<CurrentExpr, HopfError> {
    let x = iterate(CurrentExpr::generator(gen, node, base, 0), 0, k, it)?;
    let tags: Vec<i32> = (0..k as i32).collect();
    Ok(x.retag(&tags).canonical())
}

/// Resolved multi-slot expression as a boson word sum.
pub fn to_boson(x: &CurrentExpr) -> Result<BosonExpr, HopfError> {
    let mut out = BosonExpr::default();
    for (c, w) in &x.terms {
        let mut t = BosonExpr::one().scale(Complex64::new(c.to_f64().unwrap_or(0.0), 0.0));
        for (slot, letters) in w.iter().enumerate() {
            for l in letters {
                let kind = l.gen.kind().ok_or_else(|| HopfError::Unsupported(l.label()))?;
                if !l.shift.is_zero() {
                    return Err(HopfError::Unsupported(format!("unresolved {}", l.label())));
                }
                t = t.mul(&BosonExpr::letter(slot, kind, l.node, l.base.clone()));
            }
        }
        out = out.add(&t);
    }
    Ok(out)
}

/// Level-`k` boson current, panicking only on generators the backend cannot carry.
pub fn level_k_current(kind: Kind, node: usize, arg: &ShiftExpr, k: usize) -> BosonExpr {
    let img = level_k_image(Gen::from_kind(kind), node, arg, k, Iteration::Left).expect("current generator");
    to_boson(&img).expect("current letters")
}

/// Left against right iteration at level `k`; reported, not asserted.
pub fn coassociativity_report(nodes: usize, k: usize) -> Result<Check, HopfError> {
    let u = ShiftExpr::var("u");
    let mut diffs = Vec::new();
    let mut total = 0usize;
    for i in 1..=nodes {
        for gen in Gen::CURRENTS {
            let l = level_k_image(gen, i, &u, k, Iteration::Left)?;
            let r = level_k_image(gen, i, &u, k, Iteration::Right)?;
            let d = l.add(&r.scale(Rational64::from_integer(-1)))?.canonical();
            total += d.terms.len();
            if !d.terms.is_empty() {
                diffs.push(format!("{}_{i}: {} words", gen.label(), d.terms.len()));
            }
        }
    }
    let c = Check::new(format!("level {k}: left vs right iterated coproduct"), total as f64, nodes * 4, 0.5).informational();
    Ok(if diffs.is_empty() { c.with_note("identical images") } else { c.with_note(diffs.join(", ")) })
}

#[derive(Clone, Debug, Serialize)]
pub struct HomomorphismReport {
    pub checks: Vec<Check>,
    pub poles: Vec<(usize, PoleEntry)>,
}

/// Defining relations of the level-2 images (`c_0 = c_1 = 1`) against the structure functions of
/// `A_{hbar, eta}(g^)` at `c = 2`.
pub fn verify_homomorphism<R: Rng>(
    hbar: f64,
    eta: f64,
    cartan: &CartanData,
    samples: usize,
    rng: &mut R,
    tol: f64,
    quad_tol: f64,
) -> Result<HomomorphismReport, HopfError> {
    let params = ParamTower::with_levels(hbar, eta, &[1, 1])?;
    let engine = Engine::new(&params, cartan, ZeroModeConvention::Cocycle, 2, quad_tol)?;
    let current = |kind: Kind, node: usize, arg: &ShiftExpr| level_k_current(kind, node, arg, 2);
    let ctx = Ctx { eta: 0, eta_prime: 2, c: Rational64::from_integer(2) };
    let sampler = Sampler::default();
    let mut checks = Vec::new();
    for case in exchange_cases(cartan) {
        checks.push(exchange_check(&engine, &current, &case, ctx, samples, &sampler, rng, tol)?);
    }
    checks.extend(serre_checks(&engine, &current, ctx, samples, &sampler, rng, tol)?);
    let mut poles = Vec::new();
    for i in cartan.nodes() {
        let (cs, ps) = ef_audit(&engine, &current, i, Rational64::from_integer(2), samples, &sampler, rng, tol)?;
        checks.extend(cs);
        poles.extend(ps.into_iter().map(|p| (i, p)));
    }
    for c in checks.iter_mut() {
        c.id = format!("k=2 {}", c.id);
    }
    Ok(HomomorphismReport { checks, poles })
}
