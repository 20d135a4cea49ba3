use num_complex::Complex64;
use num_rational::Rational64;
use serde::Serialize;

use crate::boson::Kind;
use crate::ser::rat_to_string;
use crate::trigcalc::{DistExpr, DistTerm, Coef, ShiftExpr, TrigFactor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum VKind {
    Phi,
    PhiStar,
    PsiStar,
    Psi,
}

impl VKind {
    pub const ALL: [VKind; 4] = [VKind::Phi, VKind::PhiStar, VKind::PsiStar, VKind::Psi];

    pub fn label(self) -> &'static str {
        match self {
            VKind::Phi => "Phi",
            VKind::PhiStar => "Phi*",
            VKind::PsiStar => "Psi*",
            VKind::Psi => "Psi",
        }
    }

    /// `Phi`, `Psi` are written `V X = c X V`; `Phi*`, `Psi*` as `X V = c V X`.
    pub fn vertex_first(self) -> bool {
        matches!(self, VKind::Phi | VKind::Psi)
    }

    /// Level index of the period: `eta' = eta^(1)` for the `Phi` family, `eta` for `Psi`.
    pub fn period(self) -> i32 {
        match self {
            VKind::Phi | VKind::PhiStar => 1,
            VKind::PsiStar | VKind::Psi => 0,
        }
    }
}

/// Index symbol of an entry: the equation's `j`, or the separate `l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sym {
    J,
    L,
}

/// `sym + offset`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Index {
    pub sym: Sym,
    pub offset: i64,
}

impl Index {
    pub const fn j(offset: i64) -> Index {
        Index { sym: Sym::J, offset }
    }

    pub const fn l(offset: i64) -> Index {
        Index { sym: Sym::L, offset }
    }

    pub fn value(&self, j: usize, l: usize) -> i64 {
        let b = match self.sym {
            Sym::J => j,
            Sym::L => l,
        } as i64;
        b + self.offset
    }

    pub fn label(&self) -> String {
        let s = match self.sym {
            Sym::J => "j",
            Sym::L => "l",
        };
        match self.offset {
            0 => s.to_string(),
            o if o > 0 => format!("{s}+{o}"),
            o => format!("{s}{o}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Case {
    /// Component `j` against node `j`.
    Same,
    /// Component `j-1` against node `j`.
    Below,
    /// Any other component: plain commutation.
    Otherwise,
    /// Pure delta commutator `[., .]`.
    Commutator,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Variant {
    AsPrinted,
    Normalized,
}

/// `sh pi eta_p (u - z - (r - j + a)/2 i hbar - s i hbar) / sh pi eta_p (u - z - (r - j)/2 i hbar - s i hbar)`.
#[derive(Clone, Debug, Serialize)]
pub struct RatioPattern {
    pub a: i64,
    #[serde(serialize_with = "crate::ser::rat")]
    pub s: Rational64,
}

/// `(sh i pi eta_p hbar)/(pi eta_p) [delta_{j, l+k}] delta(u - z - (r - support)/2 i hbar - s i hbar) (word)`.
#[derive(Clone, Debug, Serialize)]
pub struct DeltaPattern {
    pub support: Index,
    #[serde(serialize_with = "crate::ser::rat")]
    pub s: Rational64,
    /// Kronecker condition `j = l + k`, if any.
    pub kronecker: Option<i64>,
    /// Extra `H` letter `(kind, node l, shift of u in units of i hbar)`, placed before the vertex when `h_first`.
    pub h: Option<(Kind, Index, String)>,
    pub h_first: bool,
    pub vertex: Index,
}

#[derive(Clone, Debug, Serialize)]
pub struct InterRelation {
    pub id: String,
    pub kind: VKind,
    pub current: Kind,
    pub case: Case,
    /// Vertex component and current node.
    pub component: Index,
    pub node: Index,
    pub ratio: Option<RatioPattern>,
    pub delta: Option<DeltaPattern>,
    pub variant: Option<Variant>,
    pub printed: String,
}

fn q(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn vname(kind: VKind, idx: &Index) -> String {
    format!("{}_{}", kind.label(), idx.label())
}

fn cur(k: Kind) -> &'static str {
    k.label()
}

struct Builder {
    out: Vec<InterRelation>,
}

impl Builder {
    fn h_block(&mut self, kind: VKind, h: Kind, s: Rational64) {
        for (case, comp, a) in [(Case::Same, Index::j(0), Some(-2)), (Case::Below, Index::j(-1), Some(2)), (Case::Otherwise, Index::l(0), None)] {
            self.push(kind, h, case, comp, Index::j(0), a.map(|a| RatioPattern { a, s }), None, None);
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        kind: VKind,
        current: Kind,
        case: Case,
        component: Index,
        node: Index,
        ratio: Option<RatioPattern>,
        delta: Option<DeltaPattern>,
        variant: Option<Variant>,
    ) {
        let v = vname(kind, &component);
        let x = format!("{}_{}(u)", cur(current), node.label());
        let mut printed = match (case, kind.vertex_first()) {
            (Case::Commutator, true) => format!("[{v}(z), {x}]"),
            (Case::Commutator, false) => format!("[{x}, {v}(z)]"),
            (_, true) => format!("{v}(z) {x}"),
            (_, false) => format!("{x} {v}(z)"),
        };
        if let Some(r) = &ratio {
            printed += &format!(
                " = sh pi eta_p(u - z - (r-j{:+})/2 ih - {} ih)/sh pi eta_p(u - z - (r-j)/2 ih - {} ih) (reordered)",
                r.a,
                rat_to_string(&r.s),
                rat_to_string(&r.s)
            );
        } else if case == Case::Otherwise {
            printed += " = (reordered)";
        }
        if let Some(d) = &delta {
            let kr = match d.kronecker {
                Some(0) => " delta_(j,l)".to_string(),
                Some(k) => format!(" delta_(j,l{k:+})"),
                None => String::new(),
            };
            let shift = if d.s == q(0, 1) { String::new() } else { format!(" - {} ih", rat_to_string(&d.s)) };
            let v = format!("{}(z)", vname(kind, &d.vertex));
            let word = match &d.h {
                Some((k, n, sh)) if d.h_first => format!("{}_{}(u + {sh} ih) {v}", cur(*k), n.label()),
                Some((k, n, sh)) => format!("{v} {}_{}(u + {sh} ih)", cur(*k), n.label()),
                None => v,
            };
            let joiner = if case == Case::Commutator { " =" } else { " +" };
            printed += &format!(
                "{joiner} (sh i pi eta_p hbar)/(pi eta_p){kr} delta(u - z - (r-{})/2 ih{shift}) {word}",
                d.support.label()
            );
        }
        let tag = match variant {
            Some(Variant::AsPrinted) => "/printed",
            Some(Variant::Normalized) => "/normalized",
            None => "",
        };
        let case_label = match case {
            Case::Same => "same",
            Case::Below => "below",
            Case::Otherwise => "otherwise",
            Case::Commutator => "commutator",
        };
        self.out.push(InterRelation {
            id: format!("{} {} {}{}", kind.label(), cur(current), case_label, tag),
            kind,
            current,
            case,
            component,
            node,
            ratio,
            delta,
            variant,
            printed,
        });
    }

    /// The three-case block of the current carrying a delta term in one of its cases.
    fn mixed_block(&mut self, kind: VKind, current: Kind, delta_case: Case, vertex: Index, variant: Variant) {
        let support = match variant {
            Variant::AsPrinted => Index::l(0),
            Variant::Normalized => Index::j(0),
        };
        for (case, comp, a) in [(Case::Same, Index::j(0), -2), (Case::Below, Index::j(-1), 2)] {
            if case != delta_case && variant == Variant::Normalized {
                continue;
            }
            let delta = (case == delta_case).then(|| DeltaPattern {
                support,
                s: q(1, 2),
                kronecker: None,
                h: None,
                h_first: false,
                vertex,
            });
            let var = (case == delta_case).then_some(variant);
            self.push(kind, current, case, comp, Index::j(0), Some(RatioPattern { a, s: q(1, 2) }), delta, var);
        }
        if variant == Variant::AsPrinted {
            self.push(kind, current, Case::Otherwise, Index::l(0), Index::j(0), None, None, None);
        }
    }
}

/// The intertwining relations of `Phi, Phi*, Psi*, Psi` as data; the four delta terms that
/// use `l` inside `j`-indexed equations carry both readings.
pub fn catalog() -> Vec<InterRelation> {
    let mut b = Builder { out: Vec::new() };
    let commutator = |kron: i64, h: Kind, h_first: bool, vertex: Index| DeltaPattern {
        support: Index::l(0),
        s: q(0, 1),
        kronecker: Some(kron),
        h: Some((h, Index::l(0), "1/4".into())),
        h_first,
        vertex,
    };

    // Phi: V X = c X V
    b.h_block(VKind::Phi, Kind::Hp, q(3, 4));
    b.h_block(VKind::Phi, Kind::Hm, q(1, 4));
    let d = commutator(-1, Kind::Hm, true, Index::l(0));
    b.push(VKind::Phi, Kind::E, Case::Commutator, Index::j(0), Index::l(0), None, Some(d), None);
    b.mixed_block(VKind::Phi, Kind::F, Case::Same, Index::j(-1), Variant::AsPrinted);
    b.mixed_block(VKind::Phi, Kind::F, Case::Same, Index::j(-1), Variant::Normalized);

    // Phi*: X V = c V X
    b.h_block(VKind::PhiStar, Kind::Hp, q(3, 4));
    b.h_block(VKind::PhiStar, Kind::Hm, q(1, 4));
    let d = commutator(0, Kind::Hm, false, Index::l(-1));
    b.push(VKind::PhiStar, Kind::E, Case::Commutator, Index::j(0), Index::l(0), None, Some(d), None);
    b.mixed_block(VKind::PhiStar, Kind::F, Case::Below, Index::j(0), Variant::AsPrinted);
    b.mixed_block(VKind::PhiStar, Kind::F, Case::Below, Index::j(0), Variant::Normalized);

    // Psi*: X V = c V X
    b.h_block(VKind::PsiStar, Kind::Hp, q(1, 4));
    b.h_block(VKind::PsiStar, Kind::Hm, q(3, 4));
    b.mixed_block(VKind::PsiStar, Kind::E, Case::Same, Index::j(-1), Variant::AsPrinted);
    b.mixed_block(VKind::PsiStar, Kind::E, Case::Same, Index::j(-1), Variant::Normalized);
    let d = commutator(-1, Kind::Hp, false, Index::l(0));
    b.push(VKind::PsiStar, Kind::F, Case::Commutator, Index::j(0), Index::l(0), None, Some(d), None);

    // Psi: V X = c X V
    b.h_block(VKind::Psi, Kind::Hp, q(1, 4));
    b.h_block(VKind::Psi, Kind::Hm, q(3, 4));
    b.mixed_block(VKind::Psi, Kind::E, Case::Below, Index::j(0), Variant::AsPrinted);
    b.mixed_block(VKind::Psi, Kind::E, Case::Below, Index::j(0), Variant::Normalized);
    let d = commutator(0, Kind::Hp, true, Index::l(-1));
    b.push(VKind::Psi, Kind::F, Case::Commutator, Index::j(0), Index::l(0), None, Some(d), None);
    b.out
}

/// Entries of one reading: entries without a variant plus those of `v`.
pub fn entries(cat: &[InterRelation], v: Variant) -> Vec<&InterRelation> {
    cat.iter().filter(|e| e.variant.is_none() || e.variant == Some(v)).collect()
}

/// `u - z - (r - idx)/2 i hbar - s i hbar`.
pub fn support_arg(r: usize, idx: i64, s: Rational64) -> ShiftExpr {
    ShiftExpr::diff("u", "z").plus_ihbar(-q(r as i64 - idx, 2) - s)
}

impl InterRelation {
    /// Delta-free coefficient at node `j` as a sh ratio in `u, z`.
    pub fn ratio_expr(&self, r: usize, j: usize) -> Option<DistExpr> {
        let p = self.ratio.as_ref()?;
        let per = self.kind.period();
        let num = support_arg(r, j as i64 - p.a, p.s);
        let den = support_arg(r, j as i64, p.s);
        Some(DistExpr::term(DistTerm::new(Coef::one(), vec![TrigFactor::num(per, num), TrigFactor::den(per, den)], vec![])))
    }

    /// Delta support at node `j` (equation index) and `l`.
    pub fn delta_support(&self, r: usize, j: usize, l: usize) -> Option<ShiftExpr> {
        let d = self.delta.as_ref()?;
        Some(support_arg(r, d.support.value(j, l), d.s))
    }

    /// `(sh i pi eta_p hbar)/(pi eta_p)`.
    pub fn delta_weight(&self, eta_p: f64, hbar: f64) -> Complex64 {
        let pi = std::f64::consts::PI;
        Complex64::new(0.0, (pi * eta_p * hbar).sin()) / (pi * eta_p)
    }
}
