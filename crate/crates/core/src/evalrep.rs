//! The `(r+1)`-dimensional level-zero evaluation representation of `A_{hbar,eta}(sl_{r+1}^)`:
//! half currents as matrix-valued sh ratios, total currents as delta distributions, and
//! checks of the defining relations.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Rational64;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::boson::Kind;
use crate::check::Check;
use crate::liealg::{adjacent_pairs, cartan, CartanData, Series};
use crate::params::ParamTower;
use crate::structfn::{self, Ctx, Relation, Side, Sign};
use crate::trigcalc::{
    equal_numeric, plemelj_reduce, Assignment, Bv, Coef, DistExpr, DistTerm, EqConfig, Sampler, ShiftExpr, Strip,
    TrigError, TrigFactor,
};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("rank must be at least 1")]
    Rank,
    #[error("the evaluation representation needs c = 0, got {0}")]
    Level(Rational64),
    #[error(transparent)]
    Trig(#[from] TrigError),
}

/// Normalization of `f+`: as displayed, or rescaled by `nu = (2 pi/hbar)/K` so that the
/// `[E, F]` relation holds with the `2 pi/hbar` delta weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Default)]
pub enum FNorm {
    AsPrinted,
    #[default]
    Balanced,
}

#[derive(Clone, Debug, Serialize)]
pub struct EvalRep {
    pub r: usize,
    #[serde(skip)]
    pub params: ParamTower,
    pub fnorm: FNorm,
    #[serde(skip)]
    pub cartan: CartanData,
}

fn q(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn c64(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

impl EvalRep {
    pub fn build(r: usize, params: &ParamTower, fnorm: FNorm) -> Result<EvalRep, EvalError> {
        if r < 1 {
            return Err(EvalError::Rank);
        }
        let c = params.c();
        if c != Rational64::from_integer(0) {
            return Err(EvalError::Level(c));
        }
        let cartan = cartan(Series::A, r).map_err(|_| EvalError::Rank)?;
        Ok(EvalRep { r, params: params.clone(), fnorm, cartan })
    }

    pub fn dim(&self) -> usize {
        self.r + 1
    }

    /// `z + (r - l)/2 i hbar`: pole of the half currents and support of `E_l`, `F_l`.
    pub fn support(&self, l: usize) -> ShiftExpr {
        ShiftExpr::var("z").plus_ihbar(q(self.r as i64 - l as i64, 2))
    }

    fn x(&self, l: usize, arg: &ShiftExpr) -> ShiftExpr {
        arg.sub(&self.support(l))
    }

    /// `-sh(i pi eta hbar)`.
    pub fn k0(&self) -> Complex64 {
        -Complex64::new(0.0, (PI * self.params.eta_at(0).unwrap_or(1.0) * self.params.hbar).sin())
    }

    /// `K = 2 sin(pi eta hbar)/eta`, the delta weight of `E_l`.
    pub fn k(&self) -> f64 {
        let eta = self.params.eta_at(0).unwrap_or(1.0);
        2.0 * (PI * eta * self.params.hbar).sin() / eta
    }

    pub fn nu(&self) -> f64 {
        match self.fnorm {
            FNorm::AsPrinted => 1.0,
            FNorm::Balanced => 2.0 * PI / self.params.hbar / self.k(),
        }
    }

    fn lattice(&self) -> ShiftExpr {
        ShiftExpr::lattice(0, 1)
    }

    pub fn e_plus(&self, l: usize, arg: &ShiftExpr) -> DistExpr {
        let c = Coef::unit(self.dim(), l - 1, l).scale(self.k0());
        DistExpr::term(DistTerm::new(c, vec![TrigFactor::den(0, self.x(l, arg))], vec![]))
    }

    pub fn f_plus(&self, l: usize, arg: &ShiftExpr) -> DistExpr {
        let c = Coef::unit(self.dim(), l, l - 1).scale(self.k0() * self.nu());
        DistExpr::term(DistTerm::new(c, vec![TrigFactor::den(0, self.x(l, arg))], vec![]))
    }

    pub fn h_plus(&self, l: usize, arg: &ShiftExpr) -> DistExpr {
        let n = self.dim();
        let x = self.x(l, arg);
        let mut e = DistExpr::zero();
        for j in 0..n {
            let unit = Coef::unit(n, j, j);
            let t = if j == l {
                DistTerm::new(unit, vec![TrigFactor::num(0, x.plus_ihbar(q(1, 1))), TrigFactor::den(0, x.clone())], vec![])
            } else if j + 1 == l {
                DistTerm::new(unit, vec![TrigFactor::num(0, x.plus_ihbar(q(-1, 1))), TrigFactor::den(0, x.clone())], vec![])
            } else {
                DistTerm::new(unit, vec![], vec![])
            };
            e.terms.push(t);
        }
        e
    }

    /// `e-(u) = -e+(u - i/eta'')`, with `eta'' = eta` at `c = 0`.
    pub fn e_minus(&self, l: usize, arg: &ShiftExpr) -> DistExpr {
        self.e_plus(l, &arg.sub(&self.lattice())).scale(c64(-1.0))
    }

    pub fn f_minus(&self, l: usize, arg: &ShiftExpr) -> DistExpr {
        self.f_plus(l, &arg.sub(&self.lattice())).scale(c64(-1.0))
    }

    pub fn h_minus(&self, l: usize, arg: &ShiftExpr) -> DistExpr {
        self.h_plus(l, &arg.sub(&self.lattice()))
    }

    pub fn half(&self, kind: HalfKind, l: usize, arg: &ShiftExpr) -> DistExpr {
        match kind {
            HalfKind::EPlus => self.e_plus(l, arg),
            HalfKind::EMinus => self.e_minus(l, arg),
            HalfKind::FPlus => self.f_plus(l, arg),
            HalfKind::FMinus => self.f_minus(l, arg),
            HalfKind::HPlus => self.h_plus(l, arg),
            HalfKind::HMinus => self.h_minus(l, arg),
        }
    }

    /// `E_l(u) = e+(u - i0) - e-(u + i0)` (likewise `F_l`), reduced to its delta.
    pub fn total_current(&self, kind: Kind, l: usize, var: &str) -> Result<DistExpr, EvalError> {
        let u = ShiftExpr::var(var);
        let (p, m) = match kind {
            Kind::E => (self.e_plus(l, &u), self.e_minus(l, &u)),
            Kind::F => (self.f_plus(l, &u), self.f_minus(l, &u)),
            _ => return Ok(self.h(kind, l, &u)),
        };
        let diff = tag(&p, Bv::MinusI0).sub(&tag(&m, Bv::PlusI0));
        Ok(plemelj_reduce(&diff, var, Strip::PRINCIPAL, &self.params)?)
    }

    /// `H+-_l` as meromorphic matrices.
    pub fn h(&self, kind: Kind, l: usize, arg: &ShiftExpr) -> DistExpr {
        match kind {
            Kind::Hp => self.h_plus(l, arg),
            _ => self.h_minus(l, arg),
        }
    }

    fn current(&self, kind: Kind, l: usize, var: &str) -> Result<DistExpr, EvalError> {
        match kind {
            Kind::E | Kind::F => self.total_current(kind, l, var),
            _ => Ok(self.h(kind, l, &ShiftExpr::var(var))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum HalfKind {
    EPlus,
    EMinus,
    FPlus,
    FMinus,
    HPlus,
    HMinus,
}

/// Tags every reciprocal factor with a boundary value.
pub fn tag(e: &DistExpr, bv: Bv) -> DistExpr {
    DistExpr {
        terms: e
            .terms
            .iter()
            .map(|t| DistTerm {
                factors: t.factors.iter().map(|f| if f.exponent < 0 { f.clone().with_bv(bv) } else { f.clone() }).collect(),
                ..t.clone()
            })
            .collect(),
    }
}

/// Numerator and denominator of a structure function, each as a product of `sh` factors.
fn split_ratio(r: &DistExpr) -> (DistExpr, DistExpr) {
    let t = &r.terms[0];
    let num: Vec<TrigFactor> = t.factors.iter().filter(|f| f.exponent > 0).cloned().collect();
    let den: Vec<TrigFactor> = t.factors.iter().filter(|f| f.exponent < 0).map(|f| TrigFactor { exponent: 1, ..f.clone() }).collect();
    (
        DistExpr::term(DistTerm::new(t.coef.clone(), num, vec![])),
        DistExpr::term(DistTerm::new(Coef::one(), den, vec![])),
    )
}

fn relation_kinds(rel: Relation) -> (Kind, Kind) {
    match rel {
        Relation::HHpm => (Kind::Hp, Kind::Hm),
        Relation::HHsame => (Kind::Hp, Kind::Hp),
        Relation::HE(Sign::Plus) => (Kind::Hp, Kind::E),
        Relation::HE(Sign::Minus) => (Kind::Hm, Kind::E),
        Relation::HF(Sign::Plus) | Relation::HFPrinted(Sign::Plus) => (Kind::Hp, Kind::F),
        Relation::HF(Sign::Minus) | Relation::HFPrinted(Sign::Minus) => (Kind::Hm, Kind::F),
        Relation::EE => (Kind::E, Kind::E),
        Relation::FF => (Kind::F, Kind::F),
    }
}

fn eq_cfg(samples: usize, tol: f64) -> EqConfig {
    EqConfig { samples, tol, eps_pole: 1e-6, sampler: Sampler::default() }
}

/// `D(u - v) X_i(u) Y_j(v) = N(u - v) Y_j(v) X_i(u)` with `R = N/D`; the cleared form stays
/// meaningful where both currents are deltas and the support hits a pole of `R`.
#[allow(clippy::too_many_arguments)]
pub fn multiplicative_check<R: Rng>(
    rep: &EvalRep,
    rel: Relation,
    kinds: Option<(Kind, Kind)>,
    i: usize,
    j: usize,
    samples: usize,
    rng: &mut R,
    tol: f64,
) -> Result<Check, EvalError> {
    let (x, y) = kinds.unwrap_or_else(|| relation_kinds(rel));
    let ctx = Ctx::base(&rep.params);
    let ratio = structfn::ratio_at(rel, i, j, &rep.cartan, ctx, &ShiftExpr::diff("u", "v"));
    let (n, d) = split_ratio(&ratio.factors);
    let xu = rep.current(x, i, "u")?;
    let yv = rep.current(y, j, "v")?;
    let lhs = d.mul(&xu).mul(&yv);
    let rhs = n.mul(&yv).mul(&xu);
    let rep_ = equal_numeric(&lhs, &rhs, &eq_cfg(samples, tol), &rep.params, rng)?;
    let id = format!("{}_{} {}_{} [{}]", x.label(), i, y.label(), j, rel.id());
    let mut c = Check::new(id, rep_.max_residual, rep_.samples, tol);
    if matches!(rel, Relation::HFPrinted(_)) {
        c = c.informational();
    }
    Ok(c)
}

/// `[E_i(u), F_j(v)] = (2 pi/hbar) delta_ij [delta(u - v) H+_i(u) - delta(u - v) H-_i(v)]` at `c = 0`,
/// the right side with `H+-` taken as boundary values from their strips.
pub fn ef_check<R: Rng>(rep: &EvalRep, i: usize, j: usize, samples: usize, rng: &mut R, tol: f64) -> Result<Check, EvalError> {
    let e = rep.total_current(Kind::E, i, "u")?;
    let f = rep.total_current(Kind::F, j, "v")?;
    let lhs = e.commutator(&f);
    let rhs = if i == j {
        let d = DistExpr::term(DistTerm::new(Coef::one(), vec![], vec![ShiftExpr::diff("u", "v")]));
        let hp = tag(&rep.h_plus(i, &ShiftExpr::var("u")), Bv::MinusI0);
        let hm = tag(&rep.h_minus(i, &ShiftExpr::var("v")), Bv::PlusI0);
        let raw = d.mul(&hp).sub(&d.mul(&hm)).scale(c64(2.0 * PI / rep.params.hbar));
        plemelj_reduce(&raw, "v", Strip::PRINCIPAL, &rep.params)?
    } else {
        DistExpr::zero()
    };
    let r = equal_numeric(&lhs, &rhs, &eq_cfg(samples, tol), &rep.params, rng)?;
    let mut c = Check::new(format!("[E_{i}, F_{j}]"), r.max_residual, r.samples, tol);
    if i == j {
        c = c.with_note(format!("as-printed ratio LHS/RHS = K hbar/(2 pi) = {:.12}", rep.k() * rep.params.hbar / (2.0 * PI)));
    }
    Ok(c)
}

/// Serre combination on delta-supported currents (vanishes term by term).
pub fn serre_check<R: Rng>(rep: &EvalRep, side: Side, i: usize, j: usize, samples: usize, rng: &mut R, tol: f64) -> Result<Check, EvalError> {
    let kind = if side == Side::E { Kind::E } else { Kind::F };
    let k = structfn::serre_coefficient(&rep.params, Ctx::base(&rep.params), side).unwrap_or(2.0);
    let mut total = DistExpr::zero();
    for (a, b) in [("u1", "u2"), ("u2", "u1")] {
        let xa = rep.total_current(kind, i, a)?;
        let xb = rep.total_current(kind, i, b)?;
        let xj = rep.total_current(kind, j, "v")?;
        total = total
            .add(&xa.mul(&xb).mul(&xj))
            .add(&xa.mul(&xj).mul(&xb).scale(c64(-k)))
            .add(&xj.mul(&xa).mul(&xb));
    }
    let r = equal_numeric(&total, &DistExpr::zero(), &eq_cfg(samples, tol), &rep.params, rng)?;
    let s = if side == Side::E { "E" } else { "F" };
    Ok(Check::new(format!("Serre {s}_{i}{s}_{i}{s}_{j}"), r.max_residual, r.samples, tol))
}

/// Every defining relation of the representation.
pub fn verify_all<R: Rng>(rep: &EvalRep, samples: usize, rng: &mut R, tol_free: f64, tol_delta: f64) -> Result<Vec<Check>, EvalError> {
    let mut out = Vec::new();
    let nodes: Vec<usize> = rep.cartan.nodes().collect();
    for &i in &nodes {
        for &j in &nodes {
            for rel in Relation::all() {
                let tol = if matches!(rel, Relation::HHpm | Relation::HHsame) { tol_free } else { tol_delta };
                out.push(multiplicative_check(rep, rel, None, i, j, samples, rng, tol)?);
                if rel == Relation::HHsame {
                    out.push(multiplicative_check(rep, rel, Some((Kind::Hm, Kind::Hm)), i, j, samples, rng, tol)?);
                }
            }
            for s in [Sign::Plus, Sign::Minus] {
                out.push(multiplicative_check(rep, Relation::HFPrinted(s), None, i, j, samples, rng, tol_delta)?);
            }
            out.push(ef_check(rep, i, j, samples, rng, tol_delta)?);
        }
    }
    for (i, j) in adjacent_pairs(&rep.cartan) {
        for side in [Side::E, Side::F] {
            out.push(serre_check(rep, side, i, j, samples, rng, tol_delta)?);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct PoleEntry {
    pub current: String,
    /// Pole in `u`, modulo `i/eta`.
    pub pole: String,
}

/// Poles of `e+_l`, `f+_l`, `H+_l` (all at the support of index `l`).
pub fn pole_inventory(rep: &EvalRep) -> Vec<PoleEntry> {
    let mut out = Vec::new();
    for l in 1..=rep.r {
        for (name, e) in [
            ("e+", rep.e_plus(l, &ShiftExpr::var("u"))),
            ("f+", rep.f_plus(l, &ShiftExpr::var("u"))),
            ("H+", rep.h_plus(l, &ShiftExpr::var("u"))),
        ] {
            let mut poles: Vec<String> = Vec::new();
            for t in &e.terms {
                for f in t.factors.iter().filter(|f| f.exponent < 0) {
                    let at = ShiftExpr::var("u").sub(&f.arg).to_string();
                    if !poles.contains(&at) {
                        poles.push(at);
                    }
                }
            }
            for p in poles {
                out.push(PoleEntry { current: format!("{name}_{l}"), pole: p });
            }
        }
    }
    out
}

/// Literal analyticity of `e+, f+, H+` in `Pi+ = (-1/eta, 0)` (in `Im u`) for real `z`:
/// every pole `z + (r - l)/2 i hbar + k i/eta` must avoid the open strip.
pub fn strip_check(rep: &EvalRep) -> Check {
    let inv = rep.params.inv_eta_at(0).unwrap_or(1.0);
    let mut bad = Vec::new();
    for l in 1..=rep.r {
        let im = (rep.r - l) as f64 / 2.0 * rep.params.hbar;
        let m = im.rem_euclid(inv);
        if m > 1e-12 && m < inv - 1e-12 {
            bad.push(format!("l={l}: Im(u - z) = {:.4}", m - inv));
        }
    }
    let c = Check::structural("half currents analytic in Pi+ for a single real z", bad.is_empty());
    if bad.is_empty() {
        c
    } else {
        c.informational().with_note(format!("poles inside Pi+: {}", bad.join(", ")))
    }
}

/// `H+_l(u)` as `Re u -> +-inf`: the sh ratios tend to `e^{+-i pi eta hbar}` (entry `l`) and
/// their inverses (entry `l - 1`), not to 1.
pub fn asymptotic_checks(rep: &EvalRep) -> Result<Vec<Check>, EvalError> {
    let eta = rep.params.eta_at(0).unwrap_or(1.0);
    let far = 40.0 / eta;
    let ph = PI * eta * rep.params.hbar;
    let mut exact: f64 = 0.0;
    let mut identity: f64 = 0.0;
    for l in 1..=rep.r {
        for s in [1.0, -1.0] {
            let asg: Assignment = [("u".to_string(), Complex64::new(s * far, -0.1)), ("z".to_string(), c64(0.0))].into_iter().collect();
            let m = rep.h_plus(l, &ShiftExpr::var("u")).eval(&asg, &rep.params, 1e-9)?;
            for j in 0..rep.dim() {
                let want = if j == l {
                    Complex64::from_polar(1.0, s * ph)
                } else if j + 1 == l {
                    Complex64::from_polar(1.0, -s * ph)
                } else {
                    c64(1.0)
                };
                exact = exact.max((m[(j, j)] - want).norm());
                identity = identity.max((m[(j, j)] - 1.0).norm());
            }
        }
    }
    Ok(vec![
        Check::new("H+ limits e^{+-i pi eta hbar} at Re u -> +-inf", exact, 2 * rep.r, 1e-9),
        Check::new("H+ tends to the identity at Re u -> +-inf", identity, 2 * rep.r, 1e-9).informational(),
    ])
}

/// At small `eta`, entries against the rational evaluation module of the Yangian double:
/// `e+, f+ -> -i hbar/x`, `H+ -> diag((x + i hbar)/x, (x - i hbar)/x)`.
pub fn degeneration_check<R: Rng>(r: usize, hbar: f64, samples: usize, rng: &mut R, tol: f64) -> Result<Check, EvalError> {
    let p = ParamTower::with_levels(hbar, 1e-4, &[0]).map_err(|e| EvalError::Trig(e.into()))?;
    let rep = EvalRep::build(r, &p, FNorm::AsPrinted)?;
    let sampler = Sampler::default();
    let i = Complex64::i();
    let mut worst: f64 = 0.0;
    let mut used = 0;
    while used < samples {
        let asg = sampler.assignment(&["u", "z"], rng);
        let u = ShiftExpr::var("u");
        let mut ok = true;
        for l in 1..=r {
            let x = asg["u"] - asg["z"] - i * hbar * (r - l) as f64 / 2.0;
            if x.norm() < 1e-2 {
                ok = false;
                break;
            }
            let ep = rep.e_plus(l, &u).eval(&asg, &p, 1e-9)?;
            let fp = rep.f_plus(l, &u).eval(&asg, &p, 1e-9)?;
            let hp = rep.h_plus(l, &u).eval(&asg, &p, 1e-9)?;
            let want_e = -i * hbar / x;
            worst = worst.max((ep[(l - 1, l)] - want_e).norm()).max((fp[(l, l - 1)] - want_e).norm());
            for j in 0..=r {
                let want = if j == l {
                    (x + i * hbar) / x
                } else if j + 1 == l {
                    (x - i * hbar) / x
                } else {
                    c64(1.0)
                };
                worst = worst.max((hp[(j, j)] - want).norm());
            }
        }
        if ok {
            used += 1;
        }
    }
    Ok(Check::new(format!("eval entries -> Yangian double, A{r}"), worst, used, tol))
}
