//! Intertwining operators `Phi, Phi*, Psi*, Psi` between level-one modules and the
//! level-zero evaluation module: the relation catalog as data, and checks against the
//! coproduct, the exchange functions and the rational limit.

mod catalog;

pub use catalog::*;

use num_complex::Complex64;
use num_rational::Rational64;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::boson::Kind;
use crate::check::{rel_diff, Check};
use crate::evalrep::{EvalError, EvalRep, FNorm};
use crate::liealg::{cartan, CartanData, Series};
use crate::params::{ParamError, ParamTower};
use crate::structfn::{ratio_at, Ctx, Relation, Sign};
use crate::trigcalc::{Assignment, DistExpr, Sampler, ShiftExpr, TrigError};

#[derive(Debug, Error)]
pub enum IntertwineError {
    #[error("rank must be at least 1")]
    Rank,
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Trig(#[from] TrigError),
    #[error(transparent)]
    Param(#[from] ParamError),
}

const EPS_POLE: f64 = 1e-6;

fn q(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

/// Level-one tower `(c_0 = 1)` at `(hbar, eta)`.
pub fn level_one_params(hbar: f64, eta: f64) -> Result<ParamTower, ParamError> {
    ParamTower::with_levels(hbar, eta, &[1])
}

/// Entry counts: ten per operator, one commutator and one delta term per mixed block.
pub fn count_checks(cat: &[InterRelation]) -> Vec<Check> {
    let mut out = Vec::new();
    for v in [Variant::AsPrinted, Variant::Normalized] {
        let es = entries(cat, v);
        out.push(Check::structural(format!("count {v:?}: 40 entries"), es.len() == 40));
        for kind in VKind::ALL {
            let k: Vec<_> = es.iter().filter(|e| e.kind == kind).collect();
            let comm = k.iter().filter(|e| e.case == Case::Commutator).count();
            let deltas = k.iter().filter(|e| e.delta.is_some()).count();
            let per_current = [Kind::Hp, Kind::Hm, Kind::E, Kind::F].map(|c| k.iter().filter(|e| e.current == c).count());
            let mixed = match kind {
                VKind::Phi | VKind::PhiStar => per_current == [3, 3, 1, 3],
                VKind::PsiStar | VKind::Psi => per_current == [3, 3, 3, 1],
            };
            out.push(Check::structural(
                format!("count {v:?} {}: 10 entries, 1 commutator, 2 delta terms", kind.label()),
                k.len() == 10 && comm == 1 && deltas == 2 && mixed,
            ));
        }
    }
    let both = cat.iter().filter(|e| e.variant == Some(Variant::AsPrinted)).count();
    let norm = cat.iter().filter(|e| e.variant == Some(Variant::Normalized)).count();
    out.push(Check::structural("count: 4 entries carry two readings", both == 4 && norm == 4));
    out
}

/// `Phi`, `Phi*` factors use `eta'`, `Psi*`, `Psi` use `eta`.
pub fn period_checks(cat: &[InterRelation], r: usize) -> Vec<Check> {
    VKind::ALL
        .iter()
        .map(|&kind| {
            let ok = cat.iter().filter(|e| e.kind == kind).all(|e| {
                (1..=r).all(|j| match e.ratio_expr(r, j) {
                    Some(x) => x.terms.iter().all(|t| t.factors.iter().all(|f| f.period == kind.period())),
                    None => true,
                })
            });
            let p = if kind.period() == 1 { "eta'" } else { "eta" };
            Check::structural(format!("period {}: all factors in {p}", kind.label()), ok)
        })
        .collect()
}

/// The evaluation module `V` paired with an operator: period `eta_p`, module point `z + i hbar/2`.
pub struct Derivation {
    pub rep: EvalRep,
    pub kind: VKind,
}

/// How the coproduct places `V`'s current for `X`: argument shift of `V`'s current
/// (units of `i hbar`), and `(component - node, vertex - node, extra H and its side)` of the delta term.
struct DerivedDelta {
    shift: Rational64,
    comp: i64,
    vertex: i64,
    h: Option<(Kind, bool)>,
}

impl Derivation {
    pub fn new(kind: VKind, r: usize, main: &ParamTower) -> Result<Derivation, IntertwineError> {
        let eta_p = main.eta_at(kind.period())?;
        let tower = ParamTower::with_levels(main.hbar, eta_p, &[0])?;
        Ok(Derivation { rep: EvalRep::build(r, &tower, FNorm::AsPrinted)?, kind })
    }

    fn point(e: &DistExpr) -> DistExpr {
        e.substitute("z", &ShiftExpr::var("z").plus_ihbar(q(1, 2)))
    }

    /// The `H` entry the coproduct attaches to component `k` when `X_node(u)` passes the operator.
    pub fn coefficient(&self, current: Kind, node: usize) -> DistExpr {
        let u = ShiftExpr::var("u");
        let phi = matches!(self.kind, VKind::Phi | VKind::PhiStar);
        let (h, shift) = match (current, phi) {
            (Kind::Hp, true) => (Kind::Hp, q(-1, 4)),
            (Kind::Hm, true) => (Kind::Hm, q(1, 4)),
            (Kind::F, true) => (Kind::Hp, q(0, 1)),
            (Kind::Hp, false) => (Kind::Hp, q(1, 4)),
            (Kind::Hm, false) => (Kind::Hm, q(-1, 4)),
            (Kind::E, false) => (Kind::Hm, q(0, 1)),
            _ => return DistExpr::one(),
        };
        Self::point(&self.rep.h(h, node, &u.plus_ihbar(shift)))
    }

    fn delta_shape(&self, current: Kind) -> Option<DerivedDelta> {
        use VKind::*;
        let half = q(1, 2);
        let zero = q(0, 1);
        Some(match (self.kind, current) {
            (Phi, Kind::E) => DerivedDelta { shift: half, comp: -1, vertex: 0, h: Some((Kind::Hm, true)) },
            (Phi, Kind::F) => DerivedDelta { shift: zero, comp: 0, vertex: -1, h: None },
            (PhiStar, Kind::E) => DerivedDelta { shift: half, comp: 0, vertex: -1, h: Some((Kind::Hm, false)) },
            (PhiStar, Kind::F) => DerivedDelta { shift: zero, comp: -1, vertex: 0, h: None },
            (PsiStar, Kind::E) => DerivedDelta { shift: zero, comp: 0, vertex: -1, h: None },
            (PsiStar, Kind::F) => DerivedDelta { shift: half, comp: -1, vertex: 0, h: Some((Kind::Hp, false)) },
            (Psi, Kind::E) => DerivedDelta { shift: zero, comp: -1, vertex: 0, h: None },
            (Psi, Kind::F) => DerivedDelta { shift: half, comp: 0, vertex: -1, h: Some((Kind::Hp, true)) },
            _ => return None,
        })
    }

    /// Support and weight of `V`'s total current at `node`, moved to the operator's frame.
    pub fn delta(&self, current: Kind, node: usize) -> Result<Option<(ShiftExpr, Complex64)>, IntertwineError> {
        let Some(shape) = self.delta_shape(current) else { return Ok(None) };
        let total = self.rep.total_current(current, node, "u")?;
        let groups = total.delta_groups();
        let Some((support, coef)) = groups.iter().next() else { return Ok(None) };
        let s = support[0]
            .substitute("u", &ShiftExpr::var("u").plus_ihbar(shape.shift))
            .substitute("z", &ShiftExpr::var("z").plus_ihbar(q(1, 2)));
        let (row, col) = match current {
            Kind::E => (node - 1, node),
            _ => (node, node - 1),
        };
        let m = coef.eval(&Assignment::new(), &self.rep.params, EPS_POLE)?;
        Ok(Some((s, m[(row, col)])))
    }
}

fn same_support(a: &ShiftExpr, b: &ShiftExpr) -> bool {
    a == b || *a == b.neg()
}

fn draw(vars: &[&str], rng: &mut impl Rng) -> Assignment {
    Sampler::default().assignment(vars, rng)
}

/// Delta-free coefficients of `variant` against the coproduct on `V`.
pub fn derivation_checks<R: Rng>(
    cat: &[InterRelation],
    variant: Variant,
    r: usize,
    main: &ParamTower,
    samples: usize,
    rng: &mut R,
    tol: f64,
) -> Result<Vec<Check>, IntertwineError> {
    let mut out = Vec::new();
    for kind in VKind::ALL {
        let d = Derivation::new(kind, r, main)?;
        for e in entries(cat, variant).into_iter().filter(|e| e.kind == kind && e.case != Case::Commutator) {
            let mut worst: f64 = 0.0;
            let mut used = 0;
            for j in 1..=r {
                let comps: Vec<usize> = match e.case {
                    Case::Same => vec![j],
                    Case::Below => vec![j - 1],
                    _ => (0..=r).filter(|&k| k != j && k + 1 != j).collect(),
                };
                let derived = d.coefficient(e.current, j);
                let cat_expr = e.ratio_expr(r, j).unwrap_or_else(DistExpr::one);
                for &k in &comps {
                    let mut n = 0;
                    let mut tries = 0;
                    while n < samples && tries < 20 * samples + 100 {
                        tries += 1;
                        let asg = draw(&["u", "z"], rng);
                        let (Ok(a), Ok(b)) = (
                            cat_expr.eval_scalar(&asg, main, EPS_POLE),
                            derived.eval(&asg, &d.rep.params, EPS_POLE),
                        ) else {
                            continue;
                        };
                        worst = worst.max(rel_diff(a, b[(k, k)]));
                        n += 1;
                    }
                    used += n;
                }
            }
            out.push(Check::new(format!("derive {:?} {}", variant, e.id), worst, used, tol));
        }
    }
    Ok(out)
}

/// Per delta entry: does the transcribed term match the one the coproduct produces.
#[derive(Clone, Debug, Serialize)]
pub struct DeltaComparison {
    pub id: String,
    pub j: usize,
    /// `l` values at which the transcribed support agrees with the derived one.
    pub matching_l: Vec<usize>,
    pub derived_support: String,
    pub structure_ok: bool,
    pub weight_ratio: Complex64,
}

fn compare_delta(
    e: &InterRelation,
    d: &Derivation,
    r: usize,
    main: &ParamTower,
) -> Result<Vec<DeltaComparison>, IntertwineError> {
    let Some(p) = e.delta.as_ref() else { return Ok(vec![]) };
    let shape = d.delta_shape(e.current).expect("delta entries are E or F");
    let eta_p = main.eta_at(e.kind.period())?;
    let mut out = Vec::new();
    for node in 1..=r {
        // Node of the current is `j` for the mixed blocks and `l` for commutators.
        let (j, comp_off, vert_off) = if e.case == Case::Commutator {
            let comp = node as i64 + p.kronecker.unwrap_or(0);
            if comp < 0 || comp > r as i64 {
                continue;
            }
            (comp as usize, p.kronecker.unwrap_or(0), p.vertex.offset)
        } else {
            (node, e.component.offset, p.vertex.offset)
        };
        let Some((derived, weight)) = d.delta(e.current, node)? else { continue };
        let matching_l: Vec<usize> = (1..=r)
            .filter(|&l| {
                let l_eff = if e.case == Case::Commutator { node } else { l };
                e.delta_support(r, j, l_eff).is_some_and(|s| same_support(&s, &derived))
            })
            .collect();
        let h_ok = match (&p.h, shape.h) {
            (None, None) => true,
            (Some((k, idx, s)), Some((dk, first))) => *k == dk && idx.offset == 0 && s == "1/4" && p.h_first == first,
            _ => false,
        };
        let structure_ok = comp_off == shape.comp && vert_off == shape.vertex && h_ok;
        out.push(DeltaComparison {
            id: e.id.clone(),
            j,
            matching_l,
            derived_support: derived.to_string(),
            structure_ok,
            weight_ratio: e.delta_weight(eta_p, main.hbar) / weight,
        });
    }
    Ok(out)
}

/// The transcribed delta term matches the derived one whatever `l` is bound to.
fn agrees(cmp: &[DeltaComparison], r: usize) -> bool {
    cmp.iter().all(|c| c.structure_ok && c.matching_l == (1..=r).collect::<Vec<_>>())
}

/// Delta terms of `variant` against the coproduct: support, component, vertex, extra `H`,
/// and one common weight factor across all of them.
pub fn delta_checks(
    cat: &[InterRelation],
    variant: Variant,
    r: usize,
    main: &ParamTower,
) -> Result<(Vec<Check>, Vec<DeltaComparison>), IntertwineError> {
    let mut checks = Vec::new();
    let mut all = Vec::new();
    for kind in VKind::ALL {
        let d = Derivation::new(kind, r, main)?;
        for e in entries(cat, variant).into_iter().filter(|e| e.kind == kind && e.delta.is_some()) {
            let cmp = compare_delta(e, &d, r, main)?;
            let ok = !cmp.is_empty() && agrees(&cmp, r);
            let mut c = Check::structural(format!("delta {:?} {}", variant, e.id), ok);
            if e.variant == Some(Variant::AsPrinted) && !ok {
                c = c.informational().with_note("l is unbound in a j-indexed equation; agrees only at l = j");
            }
            checks.push(c);
            all.extend(cmp);
        }
    }
    let w0 = all.first().map(|c| c.weight_ratio).unwrap_or_default();
    let spread = all.iter().map(|c| rel_diff(c.weight_ratio, w0)).fold(0.0, f64::max);
    checks.push(
        Check::new(format!("delta {variant:?}: one weight convention"), spread, all.len(), 1e-12)
            .with_note(format!("transcribed/derived weight = {:.12}{:+.12}i", w0.re, w0.im)),
    );
    Ok((checks, all))
}

/// `X_i(u) Y_j(v) = R(u - v) Y_j(v) X_i(u)` with `R` from the exchange functions; `None` if
/// the exchange carries a delta term.
fn exchange(x: (Kind, usize, &str), y: (Kind, usize, &str), cartan: &CartanData, ctx: Ctx) -> Option<(DistExpr, bool)> {
    let ((x, i, a), (y, j, b)) = (x, y);
    let rel = |a: Kind, b: Kind| -> Option<Relation> {
        Some(match (a, b) {
            (Kind::Hp, Kind::Hm) => Relation::HHpm,
            (Kind::Hp, Kind::Hp) | (Kind::Hm, Kind::Hm) => Relation::HHsame,
            (Kind::Hp, Kind::E) => Relation::HE(Sign::Plus),
            (Kind::Hm, Kind::E) => Relation::HE(Sign::Minus),
            (Kind::Hp, Kind::F) => Relation::HF(Sign::Plus),
            (Kind::Hm, Kind::F) => Relation::HF(Sign::Minus),
            (Kind::E, Kind::E) => Relation::EE,
            (Kind::F, Kind::F) => Relation::FF,
            _ => return None,
        })
    };
    if matches!((x, y), (Kind::E, Kind::F) | (Kind::F, Kind::E)) {
        return (i != j).then(|| (DistExpr::one(), false));
    }
    if let Some(rl) = rel(x, y) {
        return Some((ratio_at(rl, i, j, cartan, ctx, &ShiftExpr::diff(a, b)).factors, false));
    }
    let rl = rel(y, x)?;
    Some((ratio_at(rl, j, i, cartan, ctx, &ShiftExpr::diff(b, a)).factors, true))
}

/// `X_i(var) V_k = m V_k X_i(var)` from the catalog; `None` if a delta term appears.
fn passage(es: &[&InterRelation], kind: VKind, x: Kind, i: usize, k: usize, r: usize, var: &str) -> Option<DistExpr> {
    let pick = es.iter().filter(|e| e.kind == kind && e.current == x);
    let mut coef = None;
    for e in pick {
        let hit = match e.case {
            Case::Commutator => {
                let d = e.delta.as_ref()?;
                if k as i64 == i as i64 + d.kronecker.unwrap_or(0) {
                    return None;
                }
                true
            }
            Case::Same => k == i,
            Case::Below => k + 1 == i,
            Case::Otherwise => k != i && k + 1 != i,
        };
        if !hit {
            continue;
        }
        if e.delta.is_some() {
            return None;
        }
        coef = Some(e.ratio_expr(r, i).unwrap_or_else(DistExpr::one));
        break;
    }
    let c = coef?.substitute("u", &ShiftExpr::var(var));
    Some(c)
}

/// Summary of the diamond check for one operator.
#[derive(Clone, Debug, Serialize)]
pub struct DiamondSummary {
    pub kind: VKind,
    pub variant: Variant,
    pub triples: usize,
    pub skipped_current_delta: usize,
    pub skipped_vertex_delta: usize,
    pub max_residual: f64,
}

/// For every triple `(X_i(u), Y_j(v), V_k(z))` with delta-free exchanges, reorders
/// `X Y V` to `V X Y` along both sides of the diamond and compares the scalars.
pub fn diamond_checks<R: Rng>(
    cat: &[InterRelation],
    variant: Variant,
    r: usize,
    main: &ParamTower,
    samples: usize,
    rng: &mut R,
    tol: f64,
) -> Result<(Vec<Check>, Vec<DiamondSummary>), IntertwineError> {
    let cd = cartan(Series::A, r).map_err(|_| IntertwineError::Rank)?;
    let ctx = Ctx::base(main);
    let es = entries(cat, variant);
    let currents = [Kind::Hp, Kind::Hm, Kind::E, Kind::F];
    let mut checks = Vec::new();
    let mut sums = Vec::new();
    for kind in VKind::ALL {
        let mut s = DiamondSummary { kind, variant, triples: 0, skipped_current_delta: 0, skipped_vertex_delta: 0, max_residual: 0.0 };
        let mut used = 0;
        for x in currents {
            for y in currents {
                for i in 1..=r {
                    for j in 1..=r {
                        let (Some(xy), Some(yx)) = (exchange((x, i, "u"), (y, j, "v"), &cd, ctx), exchange((y, j, "v"), (x, i, "u"), &cd, ctx)) else {
                            s.skipped_current_delta += r + 1;
                            continue;
                        };
                        for k in 0..=r {
                            let (Some(mx), Some(my)) =
                                (passage(&es, kind, x, i, k, r, "u"), passage(&es, kind, y, j, k, r, "v"))
                            else {
                                s.skipped_vertex_delta += 1;
                                continue;
                            };
                            s.triples += 1;
                            let mut n = 0;
                            let mut tries = 0;
                            while n < samples && tries < 20 * samples + 100 {
                                tries += 1;
                                let asg = draw(&["u", "v", "z"], rng);
                                let ev = |e: &DistExpr| e.eval_scalar(&asg, main, EPS_POLE);
                                let (Ok(a), Ok(b), Ok(p), Ok(q2)) = (ev(&mx), ev(&my), ev(&xy.0), ev(&yx.0)) else {
                                    continue;
                                };
                                let r_xy = if xy.1 { 1.0 / p } else { p };
                                let r_yx = if yx.1 { 1.0 / q2 } else { q2 };
                                let (a, b) = if kind.vertex_first() { (1.0 / a, 1.0 / b) } else { (a, b) };
                                let path1 = b * a;
                                let path2 = r_xy * a * b * r_yx;
                                s.max_residual = s.max_residual.max(rel_diff(path1, path2));
                                n += 1;
                            }
                            used += n;
                        }
                    }
                }
            }
        }
        checks.push(
            Check::new(format!("diamond {:?} {} A{r}", variant, kind.label()), s.max_residual, used, tol).with_note(format!(
                "{} triples; skipped {} with a current delta, {} with a vertex delta",
                s.triples, s.skipped_current_delta, s.skipped_vertex_delta
            )),
        );
        sums.push(s);
    }
    Ok((checks, sums))
}

/// As `eta -> 0` every coefficient tends to the rational ratio and every delta weight to `i hbar`.
pub fn degeneration_checks<R: Rng>(
    cat: &[InterRelation],
    r: usize,
    hbar: f64,
    samples: usize,
    rng: &mut R,
    tol: f64,
) -> Result<Vec<Check>, IntertwineError> {
    let eta = 1e-4;
    let main = level_one_params(hbar, eta)?;
    let mut worst: f64 = 0.0;
    let mut used = 0;
    let mut wworst: f64 = 0.0;
    let ih = Complex64::new(0.0, hbar);
    for e in cat {
        if e.delta.is_some() {
            let w = e.delta_weight(main.eta_at(e.kind.period())?, hbar);
            wworst = wworst.max(rel_diff(w, ih));
        }
        let Some(p) = &e.ratio else { continue };
        for j in 1..=r {
            let x = e.ratio_expr(r, j).expect("ratio");
            for _ in 0..samples {
                let asg = draw(&["u", "z"], rng);
                let Ok(v) = x.eval_scalar(&asg, &main, EPS_POLE) else { continue };
                let lin = |a: i64| {
                    let s = support_arg(r, j as i64 - a, p.s);
                    s.eval(&asg, &main)
                };
                let rat = lin(p.a)? / lin(0)?;
                worst = worst.max(rel_diff(v, rat));
                used += 1;
            }
        }
    }
    Ok(vec![
        Check::new(format!("degeneration A{r}: coefficients -> rational"), worst, used, tol),
        Check::new(format!("degeneration A{r}: delta weights -> i hbar"), wworst, 1, tol),
    ])
}

/// Which reading of the four doubly transcribed delta terms agrees with the coproduct.
#[derive(Clone, Debug, Serialize)]
pub struct VariantReport {
    pub rank: usize,
    pub entries: Vec<VariantEntry>,
    pub as_printed_consistent: bool,
    pub normalized_consistent: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VariantEntry {
    pub id: String,
    pub as_printed: String,
    pub normalized: String,
    pub derived: Vec<DeltaComparison>,
    pub as_printed_ok: bool,
    pub normalized_ok: bool,
}

pub fn variant_report(cat: &[InterRelation], r: usize, main: &ParamTower) -> Result<VariantReport, IntertwineError> {
    let mut entries_out = Vec::new();
    for e in cat.iter().filter(|e| e.variant == Some(Variant::AsPrinted)) {
        let n = cat
            .iter()
            .find(|o| o.variant == Some(Variant::Normalized) && o.kind == e.kind && o.current == e.current && o.case == e.case)
            .expect("paired reading");
        let d = Derivation::new(e.kind, r, main)?;
        let cp = compare_delta(e, &d, r, main)?;
        let cn = compare_delta(n, &d, r, main)?;
        entries_out.push(VariantEntry {
            id: e.id.trim_end_matches("/printed").to_string(),
            as_printed: e.printed.clone(),
            normalized: n.printed.clone(),
            derived: cn.clone(),
            as_printed_ok: agrees(&cp, r),
            normalized_ok: agrees(&cn, r),
        });
    }
    Ok(VariantReport {
        rank: r,
        as_printed_consistent: entries_out.iter().all(|e| e.as_printed_ok),
        normalized_consistent: entries_out.iter().all(|e| e.normalized_ok),
        entries: entries_out,
    })
}

/// The catalog as pretty JSON, one object per entry.
pub fn export_catalog() -> String {
    serde_json::to_string_pretty(&catalog()).expect("catalog serializes")
}

#[derive(Clone, Debug, Serialize)]
pub struct IntertwineReport {
    pub checks: Vec<Check>,
    pub diamonds: Vec<DiamondSummary>,
    pub variants: VariantReport,
}

/// Counts, periods, derivation, delta terms and diamonds for the requested reading(s), plus
/// degeneration and the reading report.
pub fn verify_suite<R: Rng>(
    r: usize,
    hbar: f64,
    eta: f64,
    variants: &[Variant],
    samples: usize,
    rng: &mut R,
    tol: f64,
) -> Result<IntertwineReport, IntertwineError> {
    if r < 1 {
        return Err(IntertwineError::Rank);
    }
    let cat = catalog();
    let main = level_one_params(hbar, eta)?;
    let mut checks = count_checks(&cat);
    checks.extend(period_checks(&cat, r));
    let mut diamonds = Vec::new();
    for &v in variants {
        checks.extend(derivation_checks(&cat, v, r, &main, samples, rng, tol)?);
        checks.extend(delta_checks(&cat, v, r, &main)?.0);
        let (c, s) = diamond_checks(&cat, v, r, &main, samples, rng, tol)?;
        checks.extend(c);
        diamonds.extend(s);
    }
    checks.extend(degeneration_checks(&cat, r, hbar, samples, rng, 1e-6)?);
    let variants = variant_report(&cat, r.max(2), &main)?;
    Ok(IntertwineReport { checks, diamonds, variants })
}
