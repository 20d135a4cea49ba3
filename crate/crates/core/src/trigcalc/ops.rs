//! Boundary values to deltas, residues, and numeric equality of expressions.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use super::expr::{Coef, DistExpr, DistTerm};
use super::factor::{Bv, TrigFactor};
use super::shift::{Assignment, ShiftExpr};
use super::TrigError;
use crate::params::ParamTower;

/// Which lattice zero of `1/sh(pi eta_p x)` keeps its delta: `x = k i/eta_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Strip {
    pub k: i64,
}

impl Strip {
    pub const PRINCIPAL: Strip = Strip { k: 0 };
}

fn untagged(factors: &[TrigFactor], at: usize) -> Vec<TrigFactor> {
    let mut f = factors.to_vec();
    f[at].bv = Bv::None;
    f
}

/// Replaces each pair `c [1/sh(pi eta_p (x - i0))] - c [1/sh(pi eta_p (x + i0))]` (same cofactor)
/// by `c (2i/eta_p) (-1)^k delta(x - k i/eta_p)` times the cofactor restricted to the support.
pub fn plemelj_reduce(expr: &DistExpr, var: &str, strip: Strip, params: &ParamTower) -> Result<DistExpr, TrigError> {
    let e = expr.canonicalize()?;
    let tagged = |t: &DistTerm, bv: Bv| -> Option<usize> {
        t.factors
            .iter()
            .position(|f| f.bv == bv && f.exponent == -1 && f.arg.coeff(var) != 0)
    };
    if !e.terms.iter().any(|t| t.factors.iter().any(|f| f.bv != Bv::None)) {
        return Ok(e);
    }
    let mut used = vec![false; e.terms.len()];
    let mut out = DistExpr::zero();
    let mut reduced = 0;
    for i in 0..e.terms.len() {
        if used[i] {
            continue;
        }
        let ti = &e.terms[i];
        let Some(a) = tagged(ti, Bv::MinusI0) else { continue };
        let key = untagged(&ti.factors, a);
        let partner = (0..e.terms.len()).find(|&j| {
            !used[j]
                && j != i
                && e.terms[j].deltas == ti.deltas
                && tagged(&e.terms[j], Bv::PlusI0).is_some_and(|b| untagged(&e.terms[j].factors, b) == key)
        });
        let Some(j) = partner else { continue };
        let tj = &e.terms[j];
        let sum = ti.coef.add(&tj.coef);
        if sum.max_abs() > 1e-12 * ti.coef.max_abs().max(1.0) {
            return Err(TrigError::MismatchedPair);
        }
        used[i] = true;
        used[j] = true;
        let f = &ti.factors[a];
        let eta = params.eta_at(f.period)?;
        let sign = if strip.k % 2 == 0 { 1.0 } else { -1.0 };
        let c = Complex64::new(0.0, 2.0 / eta) * sign;
        let mut factors = ti.factors.clone();
        factors.remove(a);
        let mut deltas = ti.deltas.clone();
        deltas.push(f.arg.sub(&ShiftExpr::lattice(f.period, strip.k)));
        out.terms.push(DistTerm { coef: ti.coef.scale(c), factors, deltas });
        reduced += 1;
    }
    if reduced == 0 {
        return Err(TrigError::NoPair);
    }
    for (k, t) in e.terms.iter().enumerate() {
        if !used[k] {
            out.terms.push(t.clone());
        }
    }
    out.canonicalize()
}

/// Residue in `var` at `var = at`, using `d/dx sh(pi eta_p x)|_0 = pi eta_p`.
pub fn residue(expr: &DistExpr, var: &str, at: &ShiftExpr, params: &ParamTower) -> Result<DistExpr, TrigError> {
    let e = expr.canonicalize()?;
    let mut out = DistExpr::zero();
    let mut any = false;
    for t in &e.terms {
        if t.deltas.iter().any(|d| d.coeff(var) != 0) {
            return Err(TrigError::DeltaPresent);
        }
        let mut poles = Vec::new();
        let mut zeros = 0;
        for (n, f) in t.factors.iter().enumerate() {
            if f.arg.coeff(var) == 0 {
                continue;
            }
            if let Some(k) = f.arg.substitute(var, at).as_lattice_point(f.period) {
                if f.exponent < 0 {
                    poles.push((n, k));
                } else {
                    zeros += 1;
                }
            }
        }
        match (poles.len(), zeros) {
            (0, _) => continue,
            (1, 0) => {}
            _ => return Err(TrigError::HigherOrder),
        }
        any = true;
        let (n, k) = poles[0];
        let f = &t.factors[n];
        let eta = params.eta_at(f.period)?;
        let a = f.arg.coeff(var) as f64;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let scale = Complex64::new(sign / (PI * eta * a), 0.0);
        let factors = t
            .factors
            .iter()
            .enumerate()
            .filter(|(m, _)| *m != n)
            .map(|(_, g)| g.substitute(var, at))
            .collect();
        let deltas = t.deltas.clone();
        out.terms.push(DistTerm { coef: t.coef.scale(scale), factors, deltas });
    }
    if !any {
        return Err(TrigError::NotAPole);
    }
    out.canonicalize()
}

/// Sampling box for formal variables.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Sampler {
    pub re: (f64, f64),
    pub im: (f64, f64),
}

impl Default for Sampler {
    fn default() -> Self {
        Sampler { re: (-2.0, 2.0), im: (-0.3, 0.3) }
    }
}

impl Sampler {
    pub fn draw<R: Rng>(&self, rng: &mut R) -> Complex64 {
        Complex64::new(rng.gen_range(self.re.0..self.re.1), rng.gen_range(self.im.0..self.im.1))
    }

    pub fn assignment<R: Rng, S: AsRef<str>>(&self, vars: &[S], rng: &mut R) -> Assignment {
        vars.iter().map(|v| (v.as_ref().to_string(), self.draw(rng))).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EqConfig {
    pub samples: usize,
    pub tol: f64,
    pub eps_pole: f64,
    pub sampler: Sampler,
}

impl Default for EqConfig {
    fn default() -> Self {
        EqConfig { samples: 50, tol: 1e-9, eps_pole: 1e-6, sampler: Sampler::default() }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct EqReport {
    pub max_residual: f64,
    pub samples: usize,
    pub skipped: usize,
    pub supports: usize,
    pub pass: bool,
}

/// `|a - b| / max(1, |a|, |b|)` in the max-entry norm.
pub fn rel_residual(a: &Coef, b: &Coef) -> f64 {
    let dim = a.dim().or(b.dim()).unwrap_or(1);
    let (a, b) = (a.to_matrix(dim), b.to_matrix(dim));
    let d = (&a - &b).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let s = a.iter().chain(b.iter()).map(|z| z.norm()).fold(1.0, f64::max);
    d / s
}

fn as_coef(m: crate::trigcalc::Mat) -> Coef {
    if m.nrows() == 1 {
        Coef::Scalar(m[(0, 0)])
    } else {
        Coef::Matrix(m)
    }
}

fn compare_free<R: Rng>(
    a: &DistExpr,
    b: &DistExpr,
    cfg: &EqConfig,
    params: &ParamTower,
    rng: &mut R,
) -> Result<(f64, usize, usize), TrigError> {
    let mut vars: Vec<String> = a.free_vars().union(&b.free_vars()).cloned().collect();
    vars.sort();
    let mut worst: f64 = 0.0;
    let (mut used, mut skipped) = (0, 0);
    let n = if vars.is_empty() { 1 } else { cfg.samples };
    while used < n {
        if skipped > 20 * n + 100 {
            return Err(TrigError::SamplingExhausted);
        }
        let asg = cfg.sampler.assignment(&vars, rng);
        let (x, y) = match (a.eval(&asg, params, cfg.eps_pole), b.eval(&asg, params, cfg.eps_pole)) {
            (Ok(x), Ok(y)) => (x, y),
            (Err(TrigError::PoleProximity { .. }), _) | (_, Err(TrigError::PoleProximity { .. })) => {
                skipped += 1;
                continue;
            }
            (Err(e), _) | (_, Err(e)) => return Err(e),
        };
        worst = worst.max(rel_residual(&as_coef(x), &as_coef(y)));
        used += 1;
    }
    Ok((worst, used, skipped))
}

/// Delta-free parts compared at sampled points; delta parts compared support by support.
pub fn equal_numeric<R: Rng>(
    a: &DistExpr,
    b: &DistExpr,
    cfg: &EqConfig,
    params: &ParamTower,
    rng: &mut R,
) -> Result<EqReport, TrigError> {
    let a = a.canonicalize()?;
    let b = b.canonicalize()?;
    let (mut worst, mut used, mut skipped) = compare_free(&a.delta_free_part(), &b.delta_free_part(), cfg, params, rng)?;
    let ga = a.delta_groups();
    let gb = b.delta_groups();
    let mut keys: Vec<_> = ga.keys().chain(gb.keys()).cloned().collect();
    keys.sort();
    keys.dedup();
    let zero = DistExpr::zero();
    for k in &keys {
        let (r, u, s) = compare_free(ga.get(k).unwrap_or(&zero), gb.get(k).unwrap_or(&zero), cfg, params, rng)?;
        worst = worst.max(r);
        used += u;
        skipped += s;
    }
    Ok(EqReport { max_residual: worst, samples: used, skipped, supports: keys.len(), pass: worst <= cfg.tol })
}
