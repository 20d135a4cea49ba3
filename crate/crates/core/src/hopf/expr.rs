use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::Serialize;

use super::HopfError;
use crate::boson::Kind;
use crate::ser::rat_to_string;
use crate::trigcalc::ShiftExpr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Gen {
    E,
    F,
    Hp,
    Hm,
    HpInv,
    HmInv,
    Center,
}

impl Gen {
    pub const CURRENTS: [Gen; 4] = [Gen::E, Gen::F, Gen::Hp, Gen::Hm];

    pub fn label(self) -> &'static str {
        match self {
            Gen::E => "E",
            Gen::F => "F",
            Gen::Hp => "H+",
            Gen::Hm => "H-",
            Gen::HpInv => "H+^-1",
            Gen::HmInv => "H-^-1",
            Gen::Center => "c",
        }
    }

    pub fn kind(self) -> Option<Kind> {
        match self {
            Gen::E => Some(Kind::E),
            Gen::F => Some(Kind::F),
            Gen::Hp => Some(Kind::Hp),
            Gen::Hm => Some(Kind::Hm),
            _ => None,
        }
    }

    pub fn from_kind(k: Kind) -> Gen {
        match k {
            Kind::E => Gen::E,
            Kind::F => Gen::F,
            Kind::Hp => Gen::Hp,
            Kind::Hm => Gen::Hm,
        }
    }

    pub fn inverse(self) -> Option<Gen> {
        match self {
            Gen::Hp => Some(Gen::HpInv),
            Gen::Hm => Some(Gen::HmInv),
            Gen::HpInv => Some(Gen::Hp),
            Gen::HmInv => Some(Gen::Hm),
            _ => None,
        }
    }
}

/// `i hbar sum_n a_n c_n`, with the levels `c_n` kept symbolic.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LevelShift(pub BTreeMap<i32, Rational64>);

impl LevelShift {
    pub fn c(n: i32, a: Rational64) -> Self {
        let mut s = LevelShift::default();
        if !a.is_zero() {
            s.0.insert(n, a);
        }
        s
    }

    pub fn add(&self, o: &LevelShift) -> LevelShift {
        let mut m = self.0.clone();
        for (k, v) in &o.0 {
            let e = m.entry(*k).or_insert_with(Rational64::zero);
            *e += v;
            if e.is_zero() {
                m.remove(k);
            }
        }
        LevelShift(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn resolve(&self, levels: &dyn Fn(i32) -> Option<Rational64>) -> Result<Rational64, HopfError> {
        let mut q = Rational64::zero();
        for (n, a) in &self.0 {
            q += a * levels(*n).ok_or(HopfError::MissingLevel(*n))?;
        }
        Ok(q)
    }
}

impl fmt::Display for LevelShift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(n, a)| format!("{} ih c{}", rat_to_string(a), n)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A generator in family member `tag` at spectral argument `base + shift`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct HLetter {
    pub gen: Gen,
    pub node: usize,
    pub base: ShiftExpr,
    pub shift: LevelShift,
    pub tag: i32,
}

impl HLetter {
    pub fn new(gen: Gen, node: usize, base: ShiftExpr, tag: i32) -> Self {
        HLetter { gen, node, base, shift: LevelShift::default(), tag }
    }

    pub fn center(tag: i32) -> Self {
        HLetter::new(Gen::Center, 0, ShiftExpr::zero(), tag)
    }

    fn shifted(&self, gen: Gen, by: LevelShift, tag: i32) -> HLetter {
        HLetter { gen, node: self.node, base: self.base.clone(), shift: self.shift.add(&by), tag }
    }

    pub fn arg(&self, levels: &dyn Fn(i32) -> Option<Rational64>) -> Result<ShiftExpr, HopfError> {
        Ok(self.base.plus_ihbar(self.shift.resolve(levels)?))
    }

    pub fn label(&self) -> String {
        if self.gen == Gen::Center {
            return format!("c{}", self.tag);
        }
        let mut a = self.base.to_string();
        if !self.shift.is_zero() {
            a = format!("{a} + {}", self.shift);
        }
        format!("{}_{}({a})[{}]", self.gen.label(), self.node, self.tag)
    }
}

pub type Word = Vec<Vec<HLetter>>;

/// Formal sum of tensor words; every slot carries a family tag.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurrentExpr {
    pub tags: Vec<i32>,
    #[serde(serialize_with = "ser_terms")]
    pub terms: Vec<(Rational64, Word)>,
}

fn ser_terms<S: serde::Serializer>(t: &[(Rational64, Word)], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(t.len()))?;
    for (c, w) in t {
        seq.serialize_element(&(rat_to_string(c), word_label(w)))?;
    }
    seq.end()
}

pub fn word_label(w: &Word) -> String {
    let slots: Vec<String> = w
        .iter()
        .map(|s| if s.is_empty() { "1".to_string() } else { s.iter().map(HLetter::label).collect::<Vec<_>>().join(" ") })
        .collect();
    slots.join(" (x) ")
}

fn r(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

impl CurrentExpr {
    pub fn scalar(c: Rational64) -> Self {
        CurrentExpr { tags: vec![], terms: vec![(c, vec![])] }
    }

    pub fn one(tag: i32) -> Self {
        CurrentExpr { tags: vec![tag], terms: vec![(Rational64::one(), vec![vec![]])] }
    }

    pub fn letter(l: HLetter) -> Self {
        CurrentExpr { tags: vec![l.tag], terms: vec![(Rational64::one(), vec![vec![l]])] }
    }

    pub fn generator(gen: Gen, node: usize, base: &ShiftExpr, tag: i32) -> Self {
        CurrentExpr::letter(HLetter::new(gen, node, base.clone(), tag))
    }

    pub fn degree(&self) -> usize {
        self.tags.len()
    }

    pub fn add(&self, o: &CurrentExpr) -> Result<CurrentExpr, HopfError> {
        if self.tags != o.tags {
            return Err(HopfError::Tags(format!("{:?} vs {:?}", self.tags, o.tags)));
        }
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        Ok(CurrentExpr { tags: self.tags.clone(), terms })
    }

    pub fn scale(&self, k: Rational64) -> CurrentExpr {
        CurrentExpr { tags: self.tags.clone(), terms: self.terms.iter().map(|(c, w)| (c * k, w.clone())).collect() }
    }

    /// Slotwise concatenation of words.
    pub fn mul(&self, o: &CurrentExpr) -> Result<CurrentExpr, HopfError> {
        if self.tags != o.tags {
            return Err(HopfError::Tags(format!("{:?} vs {:?}", self.tags, o.tags)));
        }
        let mut terms = Vec::new();
        for (a, wa) in &self.terms {
            for (b, wb) in &o.terms {
                let w = wa.iter().zip(wb).map(|(x, y)| x.iter().chain(y).cloned().collect()).collect();
                terms.push((a * b, w));
            }
        }
        Ok(CurrentExpr { tags: self.tags.clone(), terms })
    }

    /// Tensor product of expressions.
    pub fn tensor(&self, o: &CurrentExpr) -> CurrentExpr {
        let mut terms = Vec::new();
        for (a, wa) in &self.terms {
            for (b, wb) in &o.terms {
                let mut w = wa.clone();
                w.extend(wb.iter().cloned());
                terms.push((a * b, w));
            }
        }
        let mut tags = self.tags.clone();
        tags.extend(&o.tags);
        CurrentExpr { tags, terms }
    }

    pub fn substitute(&self, var: &str, by: &ShiftExpr) -> CurrentExpr {
        let terms = self
            .terms
            .iter()
            .map(|(c, w)| {
                let w = w
                    .iter()
                    .map(|s| s.iter().map(|l| HLetter { base: l.base.substitute(var, by), ..l.clone() }).collect())
                    .collect();
                (*c, w)
            })
            .collect();
        CurrentExpr { tags: self.tags.clone(), terms }
    }

    /// Identical words merged, zero terms dropped, deterministic order.
    pub fn canonical(&self) -> CurrentExpr {
        let mut m: BTreeMap<Word, Rational64> = BTreeMap::new();
        for (c, w) in &self.terms {
            *m.entry(w.clone()).or_insert_with(Rational64::zero) += c;
        }
        let terms = m.into_iter().filter(|(_, c)| !c.is_zero()).map(|(w, c)| (c, w)).collect();
        CurrentExpr { tags: self.tags.clone(), terms }
    }

    /// Every letter carries the tag of its slot.
    pub fn tags_consistent(&self) -> bool {
        self.terms.iter().all(|(_, w)| w.len() == self.tags.len() && w.iter().zip(&self.tags).all(|(s, t)| s.iter().all(|l| l.tag == *t)))
    }

    /// Folds the level shifts into the arguments.
    pub fn resolve(&self, levels: &dyn Fn(i32) -> Option<Rational64>) -> Result<CurrentExpr, HopfError> {
        let mut terms = Vec::new();
        for (c, w) in &self.terms {
            let mut out = Vec::new();
            for s in w {
                let mut slot = Vec::new();
                for l in s {
                    let base = if l.gen == Gen::Center { l.base.clone() } else { l.arg(levels)? };
                    slot.push(HLetter { base, shift: LevelShift::default(), ..l.clone() });
                }
                out.push(slot);
            }
            terms.push((*c, out));
        }
        Ok(CurrentExpr { tags: self.tags.clone(), terms })
    }

    pub fn retag(&self, tags: &[i32]) -> CurrentExpr {
        let terms = self
            .terms
            .iter()
            .map(|(c, w)| (*c, w.iter().zip(tags).map(|(s, t)| s.iter().map(|l| HLetter { tag: *t, ..l.clone() }).collect()).collect()))
            .collect();
        CurrentExpr { tags: tags.to_vec(), terms }
    }

    /// Replaces slot `slot` by the image of `f` (a morphism, applied letter by letter in order).
    fn map_slot(&self, slot: usize, f: &dyn Fn(&HLetter) -> Result<CurrentExpr, HopfError>, reverse: bool) -> Result<CurrentExpr, HopfError> {
        let mut out: Option<CurrentExpr> = None;
        let mut new_tags: Option<Vec<i32>> = None;
        for (c, w) in &self.terms {
            let before = CurrentExpr { tags: self.tags[..slot].to_vec(), terms: vec![(*c, w[..slot].to_vec())] };
            let after = CurrentExpr { tags: self.tags[slot + 1..].to_vec(), terms: vec![(Rational64::one(), w[slot + 1..].to_vec())] };
            let mut letters: Vec<&HLetter> = w[slot].iter().collect();
            if reverse {
                letters.reverse();
            }
            let mut mid: Option<CurrentExpr> = None;
            for l in letters {
                let img = f(l)?;
                mid = Some(match mid {
                    None => img,
                    Some(m) => m.mul(&img)?,
                });
            }
            let mid = match mid {
                Some(m) => m,
                None => {
                    let t = slot_image_tags(f, self.tags[slot])?;
                    CurrentExpr { tags: t.clone(), terms: vec![(Rational64::one(), vec![vec![]; t.len()])] }
                }
            };
            let piece = before.tensor(&mid).tensor(&after);
            new_tags.get_or_insert_with(|| piece.tags.clone());
            out = Some(match out {
                None => piece,
                Some(o) => o.add(&piece)?,
            });
        }
        Ok(out.unwrap_or_else(|| {
            let mut tags = self.tags.clone();
            tags.remove(slot);
            CurrentExpr { tags, terms: vec![] }
        }))
    }

    fn single(&self) -> Result<i32, HopfError> {
        match self.tags.as_slice() {
            [t] => Ok(*t),
            _ => Err(HopfError::Degree(self.tags.len())),
        }
    }
}

/// Tags produced by a slot map, probed on a central letter.
fn slot_image_tags(f: &dyn Fn(&HLetter) -> Result<CurrentExpr, HopfError>, tag: i32) -> Result<Vec<i32>, HopfError> {
    Ok(f(&HLetter::center(tag))?.tags)
}

fn term2(c: i64, left: Vec<HLetter>, right: Vec<HLetter>) -> (Rational64, Word) {
    (Rational64::from_integer(c), vec![left, right])
}

/// `Delta+_n`: member `n` into `n (x) n+1`.
pub fn coproduct_plus_letter(l: &HLetter) -> Result<CurrentExpr, HopfError> {
    let (n, m) = (l.tag, l.tag + 1);
    let s = LevelShift::c;
    let terms = match l.gen {
        Gen::Center => vec![term2(1, vec![HLetter::center(n)], vec![]), term2(1, vec![], vec![HLetter::center(m)])],
        Gen::Hp => vec![term2(1, vec![l.shifted(Gen::Hp, s(m, r(1, 4)), n)], vec![l.shifted(Gen::Hp, s(n, r(-1, 4)), m)])],
        Gen::Hm => vec![term2(1, vec![l.shifted(Gen::Hm, s(m, r(-1, 4)), n)], vec![l.shifted(Gen::Hm, s(n, r(1, 4)), m)])],
        Gen::HpInv => vec![term2(1, vec![l.shifted(Gen::HpInv, s(m, r(1, 4)), n)], vec![l.shifted(Gen::HpInv, s(n, r(-1, 4)), m)])],
        Gen::HmInv => vec![term2(1, vec![l.shifted(Gen::HmInv, s(m, r(-1, 4)), n)], vec![l.shifted(Gen::HmInv, s(n, r(1, 4)), m)])],
        Gen::E => vec![
            term2(1, vec![l.shifted(Gen::E, LevelShift::default(), n)], vec![]),
            term2(1, vec![l.shifted(Gen::Hm, s(n, r(1, 4)), n)], vec![l.shifted(Gen::E, s(n, r(1, 2)), m)]),
        ],
        Gen::F => vec![
            term2(1, vec![], vec![l.shifted(Gen::F, LevelShift::default(), m)]),
            term2(1, vec![l.shifted(Gen::F, s(m, r(1, 2)), n)], vec![l.shifted(Gen::Hp, s(m, r(1, 4)), m)]),
        ],
    };
    Ok(CurrentExpr { tags: vec![n, m], terms })
}

/// `Delta-_n`: member `n` into `n-1 (x) n`.
pub fn coproduct_minus_letter(l: &HLetter) -> Result<CurrentExpr, HopfError> {
    let (p, n) = (l.tag - 1, l.tag);
    let s = LevelShift::c;
    let terms = match l.gen {
        Gen::Center => vec![term2(1, vec![HLetter::center(p)], vec![]), term2(1, vec![], vec![HLetter::center(n)])],
        Gen::Hp => vec![term2(1, vec![l.shifted(Gen::Hp, s(n, r(1, 4)), p)], vec![l.shifted(Gen::Hp, s(p, r(-1, 4)), n)])],
        Gen::Hm => vec![term2(1, vec![l.shifted(Gen::Hm, s(n, r(-1, 4)), p)], vec![l.shifted(Gen::Hm, s(p, r(1, 4)), n)])],
        Gen::HpInv => vec![term2(1, vec![l.shifted(Gen::HpInv, s(n, r(1, 4)), p)], vec![l.shifted(Gen::HpInv, s(p, r(-1, 4)), n)])],
        Gen::HmInv => vec![term2(1, vec![l.shifted(Gen::HmInv, s(n, r(-1, 4)), p)], vec![l.shifted(Gen::HmInv, s(p, r(1, 4)), n)])],
        Gen::E => vec![
            term2(1, vec![l.shifted(Gen::E, LevelShift::default(), p)], vec![]),
            term2(1, vec![l.shifted(Gen::Hm, s(p, r(1, 4)), p)], vec![l.shifted(Gen::E, s(p, r(1, 2)), n)]),
        ],
        Gen::F => vec![
            term2(1, vec![], vec![l.shifted(Gen::F, LevelShift::default(), n)]),
            term2(1, vec![l.shifted(Gen::F, s(n, r(1, 2)), p)], vec![l.shifted(Gen::Hp, s(n, r(1, 4)), n)]),
        ],
    };
    Ok(CurrentExpr { tags: vec![p, n], terms })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PM {
    Plus,
    Minus,
}

impl PM {
    pub fn step(self) -> i32 {
        match self {
            PM::Plus => 1,
            PM::Minus => -1,
        }
    }
}

/// `S+-_n`: member `n` into `n +- 1`, an anti-morphism.
pub fn antipode_letter(l: &HLetter, sign: PM) -> Result<CurrentExpr, HopfError> {
    let t = l.tag + sign.step();
    let s = LevelShift::c;
    let one = Rational64::one();
    let terms = match l.gen {
        Gen::Center => vec![(-one, vec![vec![HLetter::center(t)]])],
        Gen::Hp | Gen::Hm | Gen::HpInv | Gen::HmInv => {
            let inv = l.gen.inverse().expect("H letter");
            vec![(one, vec![vec![l.shifted(inv, LevelShift::default(), t)]])]
        }
        Gen::E => vec![(-one, vec![vec![l.shifted(Gen::HmInv, s(t, r(-1, 4)), t), l.shifted(Gen::E, s(t, r(-1, 2)), t)]])],
        Gen::F => vec![(-one, vec![vec![l.shifted(Gen::F, s(t, r(-1, 2)), t), l.shifted(Gen::HpInv, s(t, r(-1, 4)), t)]])],
    };
    Ok(CurrentExpr { tags: vec![t], terms })
}

/// `epsilon_n` on one letter.
pub fn counit_letter(l: &HLetter) -> Rational64 {
    match l.gen {
        Gen::E | Gen::F | Gen::Center => Rational64::zero(),
        _ => Rational64::one(),
    }
}

pub fn coproduct_plus(x: &CurrentExpr) -> Result<CurrentExpr, HopfError> {
    x.single()?;
    apply_coproduct(x, 0, PM::Plus)
}

pub fn coproduct_minus(x: &CurrentExpr) -> Result<CurrentExpr, HopfError> {
    x.single()?;
    apply_coproduct(x, 0, PM::Minus)
}

/// `Delta+-` applied to one tensor slot.
pub fn apply_coproduct(x: &CurrentExpr, slot: usize, sign: PM) -> Result<CurrentExpr, HopfError> {
    let f = move |l: &HLetter| match sign {
        PM::Plus => coproduct_plus_letter(l),
        PM::Minus => coproduct_minus_letter(l),
    };
    x.map_slot(slot, &f, false).map(|e| e.canonical())
}

/// `S+-` applied to one tensor slot.
pub fn apply_antipode(x: &CurrentExpr, slot: usize, sign: PM) -> Result<CurrentExpr, HopfError> {
    let f = move |l: &HLetter| antipode_letter(l, sign);
    x.map_slot(slot, &f, true).map(|e| e.canonical())
}

pub fn antipode(x: &CurrentExpr, sign: PM) -> Result<CurrentExpr, HopfError> {
    x.single()?;
    apply_antipode(x, 0, sign)
}

/// `epsilon` applied to one tensor slot (the slot is removed).
pub fn apply_counit(x: &CurrentExpr, slot: usize) -> CurrentExpr {
    let mut tags = x.tags.clone();
    tags.remove(slot);
    let terms = x
        .terms
        .iter()
        .map(|(c, w)| {
            let k: Rational64 = w[slot].iter().map(counit_letter).product();
            let mut w = w.clone();
            w.remove(slot);
            (c * k, w)
        })
        .collect();
    CurrentExpr { tags, terms }.canonical()
}

pub fn counit(x: &CurrentExpr) -> Result<Rational64, HopfError> {
    x.single()?;
    Ok(apply_counit(x, 0).terms.iter().map(|(c, _)| *c).sum())
}

/// `m`: multiplies two adjacent slots of the same family member.
pub fn multiply(x: &CurrentExpr, slot: usize) -> Result<CurrentExpr, HopfError> {
    if slot + 1 >= x.degree() {
        return Err(HopfError::Degree(x.degree()));
    }
    if x.tags[slot] != x.tags[slot + 1] {
        return Err(HopfError::Tags(format!("m on members {} and {}", x.tags[slot], x.tags[slot + 1])));
    }
    let mut tags = x.tags.clone();
    tags.remove(slot + 1);
    let terms = x
        .terms
        .iter()
        .map(|(c, w)| {
            let mut w = w.clone();
            let right = w.remove(slot + 1);
            w[slot].extend(right);
            (*c, w)
        })
        .collect();
    Ok(CurrentExpr { tags, terms }.canonical())
}
