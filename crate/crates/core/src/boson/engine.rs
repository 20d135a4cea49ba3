//! Ordered products of bosonized currents on one or more tensor slots, reduced to
//! (scalar coefficient) x (normal-ordered monomial).

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Rational64;
use serde::Serialize;

use super::kernel::{kernel, payload, Contraction, Kind};
use super::zeromode::{commutator_matrix, ZeroModeConvention};
use super::BosonError;
use crate::liealg::CartanData;
use crate::params::ParamTower;
use crate::special::EULER_GAMMA;
use crate::trigcalc::{Assignment, ShiftExpr};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Letter {
    pub slot: usize,
    pub kind: Kind,
    pub node: usize,
    pub arg: ShiftExpr,
}

/// Normal-ordered monomial: per slot, the sorted letters (kind, node, argument).
pub type Key = Vec<Vec<(Kind, usize, ShiftExpr)>>;

/// Sum of ordered words of letters.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct BosonExpr {
    pub terms: Vec<(Complex64, Vec<Letter>)>,
}

impl BosonExpr {
    pub fn one() -> Self {
        BosonExpr { terms: vec![(Complex64::new(1.0, 0.0), vec![])] }
    }

    pub fn letter(slot: usize, kind: Kind, node: usize, arg: ShiftExpr) -> Self {
        BosonExpr { terms: vec![(Complex64::new(1.0, 0.0), vec![Letter { slot, kind, node, arg }])] }
    }

    pub fn add(&self, o: &BosonExpr) -> BosonExpr {
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        BosonExpr { terms }
    }

    pub fn scale(&self, s: Complex64) -> BosonExpr {
        BosonExpr { terms: self.terms.iter().map(|(c, w)| (c * s, w.clone())).collect() }
    }

    pub fn mul(&self, o: &BosonExpr) -> BosonExpr {
        let mut terms = Vec::new();
        for (a, wa) in &self.terms {
            for (b, wb) in &o.terms {
                let mut w = wa.clone();
                w.extend(wb.iter().cloned());
                terms.push((a * b, w));
            }
        }
        BosonExpr { terms }
    }

    pub fn product(factors: &[BosonExpr]) -> BosonExpr {
        factors.iter().fold(BosonExpr::one(), |acc, f| acc.mul(f))
    }
}

/// Level-one current `X_node(arg)` in slot 0.
pub fn level_one(kind: Kind, node: usize, arg: &ShiftExpr) -> BosonExpr {
    BosonExpr::letter(0, kind, node, arg.clone())
}

pub struct Engine {
    pub params: ParamTower,
    pub cartan: CartanData,
    pub convention: ZeroModeConvention,
    pub slots: usize,
    pub tol: f64,
    m: Vec<Vec<Rational64>>,
    table: BTreeMap<(usize, Kind, Kind, Rational64), Contraction>,
}

impl Engine {
    /// Slot `s` realizes the level-`c_s` member with periods `(eta^(s), eta^(s+1))`.
    pub fn new(
        params: &ParamTower,
        cartan: &CartanData,
        convention: ZeroModeConvention,
        slots: usize,
        tol: f64,
    ) -> Result<Engine, BosonError> {
        let mut bs: Vec<Rational64> = Vec::new();
        for i in cartan.nodes() {
            for j in cartan.nodes() {
                bs.push(cartan.b(i, j));
            }
        }
        bs.sort();
        bs.dedup();
        let mut table = BTreeMap::new();
        for s in 0..slots {
            params.eta_at(s as i32 + 1)?;
            for &b in &bs {
                let k = kernel(b, s as i32, false);
                for x in Kind::ALL {
                    for y in Kind::ALL {
                        let c = Contraction::new(&payload(x, s as i32), &payload(y, s as i32), &k, params);
                        table.insert((s, x, y, b), c);
                    }
                }
            }
        }
        Ok(Engine {
            params: params.clone(),
            cartan: cartan.clone(),
            convention,
            slots,
            tol,
            m: commutator_matrix(cartan, convention),
            table,
        })
    }

    pub fn contraction(&self, slot: usize, x: Kind, i: usize, y: Kind, j: usize) -> &Contraction {
        &self.table[&(slot, x, y, self.cartan.b(i, j))]
    }

    /// Phase exponent (mod 1) of moving the zero modes of `a` (left) past those of `b`.
    pub fn zero_mode_phase(&self, a: &Letter, b: &Letter) -> Rational64 {
        let s = a.kind.zero_mode_sign() * b.kind.zero_mode_sign();
        self.m[a.node - 1][b.node - 1] * Rational64::from_integer(s)
    }

    /// Scalar in front of the normal-ordered monomial of an ordered word.
    pub fn word_coefficient(&self, word: &[Letter], assign: &Assignment) -> Result<Complex64, BosonError> {
        let gam: i32 = word.iter().map(|l| l.kind.gamma_power()).sum();
        let mut expo = Complex64::new(EULER_GAMMA * gam as f64, 0.0);
        let mut phase = Rational64::from_integer(0);
        for (k, a) in word.iter().enumerate() {
            for b in &word[k + 1..] {
                if a.slot != b.slot {
                    continue;
                }
                let w = a.arg.sub(&b.arg).eval(assign, &self.params)?;
                expo += self.contraction(a.slot, a.kind, a.node, b.kind, b.node).eval(w, &self.params, self.tol)?;
                phase += self.zero_mode_phase(a, b);
            }
        }
        let ph = 2.0 * PI * (*phase.numer() as f64 / *phase.denom() as f64);
        Ok(expo.exp() * Complex64::from_polar(1.0, ph))
    }

    pub fn key(word: &[Letter], slots: usize) -> Key {
        let mut key: Key = vec![Vec::new(); slots];
        for l in word {
            key[l.slot].push((l.kind, l.node, l.arg.clone()));
        }
        for s in key.iter_mut() {
            s.sort();
        }
        key
    }

    /// Coefficients per normal-ordered monomial.
    pub fn eval(&self, expr: &BosonExpr, assign: &Assignment) -> Result<BTreeMap<Key, Complex64>, BosonError> {
        let mut out: BTreeMap<Key, Complex64> = BTreeMap::new();
        for (c, w) in &expr.terms {
            let v = c * self.word_coefficient(w, assign)?;
            *out.entry(Self::key(w, self.slots)).or_insert(Complex64::new(0.0, 0.0)) += v;
        }
        Ok(out)
    }

    /// Rewrites `:E_i(a) F_i(b):` with `a - b = +-i hbar c_s/2` as `H+_i(a - i hbar c_s/4)` or
    /// `H-_i(a + i hbar c_s/4)` in every slot.
    pub fn merge(&self, key: &Key) -> Result<Key, BosonError> {
        let mut key = key.clone();
        for (s, letters) in key.iter_mut().enumerate() {
            let c = self.params.level(s as i32)?;
            'again: loop {
                for a in 0..letters.len() {
                    for b in 0..letters.len() {
                        let (ka, ia, ref xa) = letters[a];
                        let (kb, ib, ref xb) = letters[b];
                        if ka != Kind::E || kb != Kind::F || ia != ib {
                            continue;
                        }
                        let d = xa.sub(xb);
                        if !d.is_constant() || d.lattice_terms().next().is_some() || d.t() != Rational64::from_integer(0) {
                            continue;
                        }
                        let merged = if d.q() == c / 2 {
                            (Kind::Hp, ia, xa.plus_ihbar(-c / 4))
                        } else if d.q() == -c / 2 {
                            (Kind::Hm, ia, xa.plus_ihbar(c / 4))
                        } else {
                            continue;
                        };
                        let (hi, lo) = if a > b { (a, b) } else { (b, a) };
                        letters.remove(hi);
                        letters.remove(lo);
                        letters.push(merged);
                        letters.sort();
                        continue 'again;
                    }
                }
                break;
            }
        }
        Ok(key)
    }
}

/// Substitutes `var -> by` in every letter argument of a key.
pub fn substitute_key(key: &Key, var: &str, by: &ShiftExpr) -> Key {
    key.iter()
        .map(|s| {
            let mut v: Vec<_> = s.iter().map(|(k, n, a)| (*k, *n, a.substitute(var, by))).collect();
            v.sort();
            v
        })
        .collect()
}

/// Human-readable monomial, e.g. `H+_1(v + 1/4ih) | E_1(u)`.
pub fn key_label(key: &Key) -> String {
    key.iter()
        .map(|s| {
            if s.is_empty() {
                "1".to_string()
            } else {
                s.iter().map(|(k, n, a)| format!("{}_{}({})", k.label(), n, a)).collect::<Vec<_>>().join(" ")
            }
        })
        .collect::<Vec<_>>()
        .join(" | ")
}
