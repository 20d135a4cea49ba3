//! Cartan data for the simply-laced series and the half-Cartan matrix `B = A/2`.

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LieError {
    #[error("rank {rank} is not admissible for series {series}")]
    BadRank { series: Series, rank: usize },
    #[error("cannot parse algebra tag `{0}`")]
    BadTag(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Series {
    A,
    D,
    E6,
    E7,
    E8,
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Series::A => "A",
            Series::D => "D",
            Series::E6 => "E6",
            Series::E7 => "E7",
            Series::E8 => "E8",
        };
        f.write_str(s)
    }
}

/// Validated Cartan matrix with its exact half `B`.
///
/// Nodes are 1-based in the public API. A-series is the chain `1..r`,
/// D-series forks at node `r-2`, E-series follows Bourbaki (node 2 hangs off node 4).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CartanData {
    pub series: Series,
    pub rank: usize,
    a: Vec<Vec<i64>>,
    #[serde(serialize_with = "crate::ser::rat_matrix")]
    b: Vec<Vec<Rational64>>,
}

fn edges(series: Series, r: usize) -> Result<Vec<(usize, usize)>, LieError> {
    let bad = || LieError::BadRank { series, rank: r };
    let chain = |n: usize| (1..n).map(|k| (k, k + 1)).collect::<Vec<_>>();
    match series {
        Series::A if r >= 1 => Ok(chain(r)),
        Series::D if r >= 4 => {
            let mut e = chain(r - 1);
            e.push((r - 2, r));
            Ok(e)
        }
        Series::E6 | Series::E7 | Series::E8 => {
            let n = match series {
                Series::E6 => 6,
                Series::E7 => 7,
                _ => 8,
            };
            if r != n {
                return Err(bad());
            }
            let mut e = vec![(1, 3), (2, 4)];
            e.extend((3..n).map(|k| (k, k + 1)));
            Ok(e)
        }
        _ => Err(bad()),
    }
}

/// Builds the Cartan data of `series` at rank `r`.
pub fn cartan(series: Series, r: usize) -> Result<CartanData, LieError> {
    let e = edges(series, r)?;
    let mut a = vec![vec![0i64; r]; r];
    for (k, row) in a.iter_mut().enumerate() {
        row[k] = 2;
    }
    for (i, j) in e {
        a[i - 1][j - 1] = -1;
        a[j - 1][i - 1] = -1;
    }
    let b = a
        .iter()
        .map(|row| row.iter().map(|&x| Rational64::new(x, 2)).collect())
        .collect();
    Ok(CartanData { series, rank: r, a, b })
}

impl CartanData {
    /// `A_ij` for 1-based nodes.
    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.a[i - 1][j - 1]
    }

    /// `B_ij = A_ij / 2` for 1-based nodes.
    pub fn b(&self, i: usize, j: usize) -> Rational64 {
        self.b[i - 1][j - 1]
    }

    pub fn a_matrix(&self) -> &[Vec<i64>] {
        &self.a
    }

    pub fn tag(&self) -> String {
        match self.series {
            Series::A | Series::D => format!("{}{}", self.series, self.rank),
            s => s.to_string(),
        }
    }

    pub fn nodes(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.rank
    }
}

/// All directed pairs `(i, j)` with `A_ij = -1`, each orientation listed.
pub fn adjacent_pairs(c: &CartanData) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in c.nodes() {
        for j in c.nodes() {
            if c.a(i, j) == -1 {
                out.push((i, j));
            }
        }
    }
    out
}

impl FromStr for CartanData {
    type Err = LieError;

    /// Parses tags such as `A3`, `D5`, `E6`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bad = || LieError::BadTag(s.to_string());
        let (head, tail) = t.split_at(t.char_indices().nth(1).map(|(k, _)| k).ok_or_else(bad)?);
        let r: usize = tail.parse().map_err(|_| bad())?;
        let series = match head {
            "A" | "a" => Series::A,
            "D" | "d" => Series::D,
            "E" | "e" => match r {
                6 => Series::E6,
                7 => Series::E7,
                8 => Series::E8,
                _ => return Err(LieError::BadRank { series: Series::E8, rank: r }),
            },
            _ => return Err(bad()),
        };
        cartan(series, r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one() {
        let c = cartan(Series::A, 1).unwrap();
        assert_eq!(c.a_matrix(), &[vec![2]]);
        assert_eq!(c.b(1, 1), Rational64::from_integer(1));
        assert!(adjacent_pairs(&c).is_empty());
    }

    #[test]
    fn sl3() {
        let c = cartan(Series::A, 2).unwrap();
        assert_eq!(c.a_matrix(), &[vec![2, -1], vec![-1, 2]]);
        assert_eq!(c.b(1, 2), Rational64::new(-1, 2));
        assert_eq!(adjacent_pairs(&c), vec![(1, 2), (2, 1)]);
    }

    // textbook D4: central node 2 joined to 1, 3, 4
    #[test]
    fn d4_against_table() {
        let table = [[2, -1, 0, 0], [-1, 2, -1, -1], [0, -1, 2, 0], [0, -1, 0, 2]];
        let c = cartan(Series::D, 4).unwrap();
        let want: Vec<Vec<i64>> = table.iter().map(|r| r.to_vec()).collect();
        assert_eq!(c.a_matrix(), &want[..]);
        let p = adjacent_pairs(&c);
        assert_eq!(p.len(), 6);
        assert!(p.iter().all(|&(i, j)| i == 2 || j == 2));
    }

    #[test]
    fn e8_has_seven_edges() {
        let c: CartanData = "E8".parse().unwrap();
        assert_eq!(adjacent_pairs(&c).len(), 14);
        assert_eq!(c.a(2, 4), -1);
    }

    #[test]
    fn rejects_bad_ranks() {
        assert!(cartan(Series::D, 3).is_err());
        assert!(cartan(Series::A, 0).is_err());
        assert!(cartan(Series::E6, 7).is_err());
        assert!("B2".parse::<CartanData>().is_err());
    }
}
