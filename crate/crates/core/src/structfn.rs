//! Exchange functions of the defining relations, built as exact `sh` ratios.

use std::f64::consts::PI;

use num_rational::Rational64;
use serde::Serialize;

use crate::liealg::CartanData;
use crate::params::{ParamError, ParamTower};
use crate::trigcalc::{DistExpr, DistTerm, Coef, ShiftExpr, TrigFactor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

/// Multiplicative relations `X_i(u) Y_j(v) = R(u - v) Y_j(v) X_i(u)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Relation {
    /// `H+_i(u) H-_j(v)`.
    HHpm,
    /// `H+-_i(u) H+-_j(v)`.
    HHsame,
    /// `H+-_i(u) E_j(v)`.
    HE(Sign),
    /// `H+-_i(u) F_j(v)`, in the form required by the realizations.
    HF(Sign),
    /// `H+-_i(u) F_j(v)` exactly as printed (same pattern as `HE` with `eta'`).
    HFPrinted(Sign),
    EE,
    FF,
}

impl Relation {
    pub fn id(&self) -> String {
        match self {
            Relation::HHpm => "HH_pm".into(),
            Relation::HHsame => "HH_same".into(),
            Relation::HE(s) => format!("H{}E", s.label()),
            Relation::HF(s) => format!("H{}F", s.label()),
            Relation::HFPrinted(s) => format!("H{}F_printed", s.label()),
            Relation::EE => "EE".into(),
            Relation::FF => "FF".into(),
        }
    }

    /// All relations checked by the suites (printed HF excluded).
    pub fn all() -> Vec<Relation> {
        vec![
            Relation::HHpm,
            Relation::HHsame,
            Relation::HE(Sign::Plus),
            Relation::HE(Sign::Minus),
            Relation::HF(Sign::Plus),
            Relation::HF(Sign::Minus),
            Relation::EE,
            Relation::FF,
        ]
    }
}

/// Which tower members play `eta` and `eta'`, and the level `c` linking them.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Ctx {
    pub eta: i32,
    pub eta_prime: i32,
    #[serde(serialize_with = "crate::ser::rat")]
    pub c: Rational64,
}

impl Ctx {
    /// Member 0 at level `c_0` (so `eta' = eta^(1)`).
    pub fn base(params: &ParamTower) -> Ctx {
        Ctx { eta: 0, eta_prime: 1, c: params.c() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StructureRatio {
    pub relation: Relation,
    pub i: usize,
    pub j: usize,
    pub ctx: Ctx,
    pub factors: DistExpr,
}

fn sh_ratio(period: i32, w: &ShiftExpr, qn: Rational64, qd: Rational64) -> Vec<TrigFactor> {
    vec![TrigFactor::num(period, w.plus_ihbar(qn)), TrigFactor::den(period, w.plus_ihbar(qd))]
}

/// Ratio with argument `w` (any linear form, e.g. `u - v`).
pub fn ratio_at(rel: Relation, i: usize, j: usize, cartan: &CartanData, ctx: Ctx, w: &ShiftExpr) -> StructureRatio {
    let b = cartan.b(i, j);
    let c = ctx.c;
    let (e, ep) = (ctx.eta, ctx.eta_prime);
    let half = Rational64::new(1, 2);
    let quarter = Rational64::new(1, 4);
    let mut f = Vec::new();
    match rel {
        Relation::EE => f.extend(sh_ratio(e, w, -b, b)),
        Relation::FF => f.extend(sh_ratio(ep, w, b, -b)),
        Relation::HHsame => {
            f.extend(sh_ratio(e, w, -b, b));
            f.extend(sh_ratio(ep, w, b, -b));
        }
        Relation::HHpm => {
            f.extend(sh_ratio(e, w, -(b - c * half), b + c * half));
            f.extend(sh_ratio(ep, w, b - c * half, -(b + c * half)));
        }
        Relation::HE(s) => {
            let s = Rational64::from_integer(s.as_i64());
            f.extend(sh_ratio(e, w, -(b - s * c * quarter), b + s * c * quarter));
        }
        Relation::HFPrinted(s) => {
            let s = Rational64::from_integer(s.as_i64());
            f.extend(sh_ratio(ep, w, -(b - s * c * quarter), b + s * c * quarter));
        }
        Relation::HF(s) => {
            let s = Rational64::from_integer(s.as_i64());
            f.extend(sh_ratio(ep, w, b - s * c * quarter, -(b + s * c * quarter)));
        }
    }
    let factors = DistExpr::term(DistTerm::new(Coef::one(), f, vec![]));
    let factors = factors.canonicalize().expect("delta-free");
    StructureRatio { relation: rel, i, j, ctx, factors }
}

/// Ratio in the single variable `w = u - v`.
pub fn ratio(rel: Relation, i: usize, j: usize, cartan: &CartanData, ctx: Ctx) -> StructureRatio {
    ratio_at(rel, i, j, cartan, ctx, &ShiftExpr::var("w"))
}

/// Serre side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    E,
    F,
}

/// `2 cos(pi eta hbar)` (E side) or `2 cos(pi eta' hbar)` (F side).
pub fn serre_coefficient(params: &ParamTower, ctx: Ctx, side: Side) -> Result<f64, ParamError> {
    let p = match side {
        Side::E => ctx.eta,
        Side::F => ctx.eta_prime,
    };
    Ok(2.0 * (PI * params.eta_at(p)? * params.hbar).cos())
}

/// At small `eta` every ratio tends to its rational counterpart, `sh(pi eta_p x) -> pi eta_p x`
/// factor by factor. Samples `w` and compares against `prod x_k^(+-1)`.
pub fn degeneration_check<R: rand::Rng>(
    cartan: &CartanData,
    hbar: f64,
    eta: f64,
    samples: usize,
    rng: &mut R,
    tol: f64,
) -> Result<crate::check::Check, crate::trigcalc::TrigError> {
    let p = ParamTower::with_levels(hbar, eta, &[1])?;
    let ctx = Ctx::base(&p);
    let sampler = crate::trigcalc::Sampler::default();
    let mut worst: f64 = 0.0;
    let mut used = 0;
    let rels = Relation::all();
    for _ in 0..samples {
        let w = sampler.draw(rng);
        let asg: crate::trigcalc::Assignment = [("w".to_string(), w)].into_iter().collect();
        for &rel in &rels {
            for i in cartan.nodes() {
                for j in cartan.nodes() {
                    let r = ratio(rel, i, j, cartan, ctx).factors;
                    let got = r.eval_scalar(&asg, &p, 1e-12)?;
                    let mut want = num_complex::Complex64::new(0.0, 0.0);
                    for t in &r.terms {
                        let mut v = t.coef.to_matrix(1)[(0, 0)];
                        for f in &t.factors {
                            v *= f.arg.eval(&asg, &p)?.powi(f.exponent);
                        }
                        want += v;
                    }
                    worst = worst.max(crate::check::rel_diff(got, want));
                }
            }
            used += 1;
        }
    }
    Ok(crate::check::Check::new(format!("degeneration {}: structure functions -> rational", cartan.tag()), worst, used, tol))
}
