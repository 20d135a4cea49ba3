//! Zero modes `exp(2 pi i Q_j)`, `exp(P_j)` and their reordering phases.

use num_rational::Rational64;
use num_traits::Zero;
use serde::Serialize;

use crate::liealg::CartanData;

/// `[P_i, Q_j]`: `B_ij + eps_ij/4` with the antisymmetric adjacency sign (`Cocycle`), or `B_ij`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Default)]
pub enum ZeroModeConvention {
    #[default]
    Cocycle,
    Symmetric,
}

/// Matrix `M_ij = [P_i, Q_j]`, 0-based.
pub fn commutator_matrix(cartan: &CartanData, conv: ZeroModeConvention) -> Vec<Vec<Rational64>> {
    let r = cartan.rank;
    let mut m = vec![vec![Rational64::zero(); r]; r];
    for i in 1..=r {
        for j in 1..=r {
            let mut v = cartan.b(i, j);
            if conv == ZeroModeConvention::Cocycle && cartan.a(i, j) == -1 {
                v += Rational64::new(if i < j { 1 } else { -1 }, 4);
            }
            m[i - 1][j - 1] = v;
        }
    }
    m
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ZeroMode {
    /// `exp(2 pi i k Q_j)`.
    Q { node: usize, k: i64 },
    /// `exp(k P_j)`.
    P { node: usize, k: i64 },
}

/// An ordered zero-mode word with an accumulated phase `exp(2 pi i phase)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZeroModeWord {
    pub letters: Vec<ZeroMode>,
    #[serde(serialize_with = "crate::ser::rat")]
    pub phase: Rational64,
}

impl ZeroModeWord {
    pub fn new(letters: Vec<ZeroMode>) -> Self {
        ZeroModeWord { letters, phase: Rational64::zero() }
    }

    pub fn is_canonical(&self) -> bool {
        !self
            .letters
            .windows(2)
            .any(|w| matches!((w[0], w[1]), (ZeroMode::P { .. }, ZeroMode::Q { .. })))
    }

    /// Swaps positions `at` and `at + 1`, picking up the phase when a `P` passes a `Q`.
    pub fn swap(&mut self, at: usize, m: &[Vec<Rational64>]) {
        let (a, b) = (self.letters[at], self.letters[at + 1]);
        match (a, b) {
            (ZeroMode::P { node: i, k }, ZeroMode::Q { node: j, k: l }) => {
                self.phase += m[i - 1][j - 1] * Rational64::from_integer(k * l);
            }
            (ZeroMode::Q { node: j, k: l }, ZeroMode::P { node: i, k }) => {
                self.phase -= m[i - 1][j - 1] * Rational64::from_integer(k * l);
            }
            _ => {}
        }
        self.letters.swap(at, at + 1);
        self.phase = self.phase - self.phase.floor();
    }

    /// All `Q` to the left of all `P`, merged per node; phase reduced mod 1.
    pub fn canonical(&self, m: &[Vec<Rational64>]) -> ZeroModeWord {
        let mut w = self.clone();
        while let Some(at) = w
            .letters
            .windows(2)
            .position(|p| matches!((p[0], p[1]), (ZeroMode::P { .. }, ZeroMode::Q { .. })))
        {
            w.swap(at, m);
        }
        w.merged()
    }

    fn merged(&self) -> ZeroModeWord {
        let mut q = std::collections::BTreeMap::new();
        let mut p = std::collections::BTreeMap::new();
        for z in &self.letters {
            match *z {
                ZeroMode::Q { node, k } => *q.entry(node).or_insert(0) += k,
                ZeroMode::P { node, k } => *p.entry(node).or_insert(0) += k,
            }
        }
        let mut letters: Vec<ZeroMode> = q.into_iter().filter(|(_, k)| *k != 0).map(|(node, k)| ZeroMode::Q { node, k }).collect();
        letters.extend(p.into_iter().filter(|(_, k)| *k != 0).map(|(node, k)| ZeroMode::P { node, k }));
        ZeroModeWord { letters, phase: self.phase }
    }
}
