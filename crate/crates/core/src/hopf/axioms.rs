use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

use super::expr::*;
use super::HopfError;
use crate::boson::Kind;
use crate::check::Check;
use crate::evalrep::EvalRep;
use crate::trigcalc::{equal_numeric, DistExpr, DistTerm, EqConfig, Sampler, ShiftExpr, TrigFactor};

fn zero_levels(_: i32) -> Option<Rational64> {
    Some(Rational64::zero())
}

/// Inverse of a diagonal matrix of sh ratios.
pub fn invert_diag(e: &DistExpr) -> DistExpr {
    DistExpr {
        terms: e
            .terms
            .iter()
            .map(|t| DistTerm {
                factors: t.factors.iter().map(|f| TrigFactor { exponent: -f.exponent, ..f.clone() }).collect(),
                ..t.clone()
            })
            .collect(),
    }
}

fn letter_dist(rep: &EvalRep, l: &HLetter) -> Result<DistExpr, HopfError> {
    let arg = l.arg(&zero_levels)?;
    Ok(match l.gen {
        Gen::E | Gen::F => {
            let kind = l.gen.kind().expect("current");
            rep.total_current(kind, l.node, "u#")?.substitute("u#", &arg)
        }
        Gen::Hp => rep.h(Kind::Hp, l.node, &arg),
        Gen::Hm => rep.h(Kind::Hm, l.node, &arg),
        Gen::HpInv => invert_diag(&rep.h(Kind::Hp, l.node, &arg)),
        Gen::HmInv => invert_diag(&rep.h(Kind::Hm, l.node, &arg)),
        Gen::Center => DistExpr::zero(),
    })
}

/// Image of a one-slot (or scalar) expression in the level-zero evaluation module, where all
/// family members coincide.
pub fn eval_backend(rep: &EvalRep, x: &CurrentExpr) -> Result<DistExpr, HopfError> {
    if x.degree() > 1 {
        return Err(HopfError::Degree(x.degree()));
    }
    let mut out = DistExpr::zero();
    for (c, w) in &x.terms {
        let mut t = DistExpr::constant(Complex64::new(c.to_f64().unwrap_or(0.0), 0.0));
        for l in w.iter().flatten() {
            t = t.mul(&letter_dist(rep, l)?);
        }
        out = out.add(&t);
    }
    Ok(out)
}

/// `(eps (x) id) Delta+_n = id`, `(id (x) eps) Delta-_n = id`,
/// `m (S+ (x) id) Delta+_n = eps`, `m (id (x) S-) Delta-_n = eps` on every generator.
pub fn verify_axioms<R: Rng>(rep: &EvalRep, n: i32, samples: usize, rng: &mut R, tol: f64) -> Result<Vec<Check>, HopfError> {
    let cfg = EqConfig { samples, tol, eps_pole: 1e-6, sampler: Sampler::default() };
    let u = ShiftExpr::var("u");
    let mut out = Vec::new();
    for i in rep.cartan.nodes() {
        for gen in Gen::CURRENTS {
            let x = CurrentExpr::generator(gen, i, &u, n);
            let eps = CurrentExpr::scalar(counit(&x)?);
            let plus = coproduct_plus(&x)?;
            let minus = coproduct_minus(&x)?;
            let cases = [
                ("AxB (eps x id) D+ = id", apply_counit(&plus, 0), CurrentExpr::generator(gen, i, &u, n + 1)),
                ("AxC (id x eps) D- = id", apply_counit(&minus, 1), CurrentExpr::generator(gen, i, &u, n - 1)),
                ("AxD m (S+ x id) D+ = eps", multiply(&apply_antipode(&plus, 0, PM::Plus)?, 0)?, eps.clone()),
                ("AxE m (id x S-) D- = eps", multiply(&apply_antipode(&minus, 1, PM::Minus)?, 0)?, eps.clone()),
            ];
            for (name, lhs, rhs) in cases {
                let a = eval_backend(rep, &lhs)?;
                let b = eval_backend(rep, &rhs)?;
                let r = equal_numeric(&a, &b, &cfg, &rep.params, rng)?;
                out.push(Check::new(format!("{name} on {}_{i}", gen.label()), r.max_residual, r.samples, tol));
            }
        }
    }
    Ok(out)
}

const ALL_GENS: [Gen; 7] = [Gen::E, Gen::F, Gen::Hp, Gen::Hm, Gen::HpInv, Gen::HmInv, Gen::Center];

/// `Delta-_n A_n = Delta+_{n-1} A_{n-1}` on generator images, for `n` in `range`.
pub fn minus_plus_identity(nodes: usize, range: std::ops::RangeInclusive<i32>) -> Result<Check, HopfError> {
    let u = ShiftExpr::var("u");
    let mut bad = Vec::new();
    for n in range {
        for i in 1..=nodes {
            for gen in ALL_GENS {
                let node = if gen == Gen::Center { 0 } else { i };
                let a = coproduct_minus(&CurrentExpr::generator(gen, node, &u, n))?.canonical();
                let b = coproduct_plus(&CurrentExpr::generator(gen, node, &u, n - 1))?.canonical();
                if a != b {
                    bad.push(format!("{}_{node} at n={n}", gen.label()));
                }
            }
        }
    }
    let c = Check::structural("Delta-_n = Delta+_{n-1} on generators", bad.is_empty());
    Ok(if bad.is_empty() { c } else { c.with_note(bad.join(", ")) })
}

/// With every `c_n = 0`, all shifts vanish and `Delta+_n` no longer depends on `n`.
pub fn zero_level_collapse(nodes: usize, range: std::ops::RangeInclusive<i32>) -> Result<Check, HopfError> {
    let u = ShiftExpr::var("u");
    let mut bad = Vec::new();
    for i in 1..=nodes {
        for gen in ALL_GENS {
            let node = if gen == Gen::Center { 0 } else { i };
            let mut reference: Option<CurrentExpr> = None;
            for n in range.clone() {
                let img = coproduct_plus(&CurrentExpr::generator(gen, node, &u, n))?.resolve(&zero_levels)?.retag(&[0, 1]);
                let shifted = img.terms.iter().flat_map(|(_, w)| w.iter().flatten()).any(|l| l.gen != Gen::Center && l.base != u);
                if shifted {
                    bad.push(format!("{}_{node} at n={n}: shift survives", gen.label()));
                }
                match &reference {
                    None => reference = Some(img),
                    Some(r) if *r != img => bad.push(format!("{}_{node} at n={n}: depends on n", gen.label())),
                    _ => {}
                }
            }
        }
    }
    let c = Check::structural("c_n = 0: coproduct is shift-free and index-free", bad.is_empty());
    Ok(if bad.is_empty() { c } else { c.with_note(bad.join(", ")) })
}
