//! Coordinate variables and their fixed positional orderings.
//!
//! The σ side is ordered `σ_ij, 1 ≤ i ≤ j ≤ n`, lexicographically. The
//! Laplacian side (`p` or `q`) is ordered `x_ij, 0 ≤ i < j ≤ n`,
//! lexicographically. Both have length `n(n+1)/2`.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarKind {
    Sigma,
    P,
    Q,
}

impl VarKind {
    pub fn prefix(self) -> char {
        match self {
            VarKind::Sigma => 's',
            VarKind::P => 'p',
            VarKind::Q => 'q',
        }
    }

    /// Laplacian-side kinds index pairs `0 ≤ i < j`.
    pub fn is_pair_kind(self) -> bool {
        !matches!(self, VarKind::Sigma)
    }
}

impl fmt::Display for VarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.prefix())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub kind: VarKind,
    pub i: usize,
    pub j: usize,
}

impl Var {
    /// `σ_ij` with the indices sorted.
    pub fn sigma(i: usize, j: usize) -> Self {
        Var {
            kind: VarKind::Sigma,
            i: i.min(j),
            j: i.max(j),
        }
    }

    pub fn pair(kind: VarKind, i: usize, j: usize) -> Self {
        Var {
            kind,
            i: i.min(j),
            j: i.max(j),
        }
    }

    pub fn p(i: usize, j: usize) -> Self {
        Self::pair(VarKind::P, i, j)
    }

    pub fn q(i: usize, j: usize) -> Self {
        Self::pair(VarKind::Q, i, j)
    }

    /// Whether the variable belongs to the coordinate ring of size `n`.
    pub fn in_universe(&self, n: usize) -> bool {
        match self.kind {
            VarKind::Sigma => 1 <= self.i && self.i <= self.j && self.j <= n,
            _ => self.i < self.j && self.j <= n,
        }
    }

    /// Positional index within the ordering of its kind.
    pub fn index(&self, n: usize) -> Option<usize> {
        if !self.in_universe(n) {
            return None;
        }
        Some(match self.kind {
            VarKind::Sigma => sigma_index(n, self.i, self.j),
            _ => pair_index(n, self.i, self.j),
        })
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.i < 10 && self.j < 10 {
            write!(f, "{}{}{}", self.kind.prefix(), self.i, self.j)
        } else {
            write!(f, "{}{}_{}", self.kind.prefix(), self.i, self.j)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid variable name `{0}`")]
pub struct ParseVarError(pub String);

impl FromStr for Var {
    type Err = ParseVarError;

    /// Accepts `q03`, `p12`, `s11` and the long form `q0_10`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseVarError(s.to_string());
        let mut chars = s.chars();
        let kind = match chars.next() {
            Some('s') => VarKind::Sigma,
            Some('p') => VarKind::P,
            Some('q') => VarKind::Q,
            _ => return Err(err()),
        };
        let rest = chars.as_str();
        let (a, b) = match rest.split_once('_') {
            Some(parts) => parts,
            None if rest.len() == 2 && rest.is_ascii() => rest.split_at(1),
            None => return Err(err()),
        };
        let i: usize = a.parse().map_err(|_| err())?;
        let j: usize = b.parse().map_err(|_| err())?;
        let ok = match kind {
            VarKind::Sigma => 1 <= i && i <= j,
            _ => i < j,
        };
        if !ok {
            return Err(err());
        }
        Ok(Var { kind, i, j })
    }
}

impl Serialize for Var {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Var {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A partial assignment of rational values to variables.
pub trait Assignment {
    fn value(&self, v: &Var) -> Option<BigRational>;
}

impl Assignment for std::collections::BTreeMap<Var, BigRational> {
    fn value(&self, v: &Var) -> Option<BigRational> {
        self.get(v).cloned()
    }
}

/// `n(n+1)/2`.
pub fn coordinate_count(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Position of `σ_ij` (`1 ≤ i ≤ j ≤ n`).
pub fn sigma_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = (i.min(j), i.max(j));
    // rows 1..i-1 hold n, n-1, ... entries
    (i - 1) * n - (i - 1) * i.saturating_sub(2) / 2 + (j - i)
}

/// Position of `x_ij` (`0 ≤ i < j ≤ n`).
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = (i.min(j), i.max(j));
    i * n - i * (i.saturating_sub(1)) / 2 + (j - i - 1)
}

pub fn sigma_vars(n: usize) -> Vec<Var> {
    (1..=n).flat_map(|i| (i..=n).map(move |j| Var::sigma(i, j))).collect()
}

pub fn pair_vars(kind: VarKind, n: usize) -> Vec<Var> {
    (0..=n)
        .flat_map(|i| (i + 1..=n).map(move |j| Var::pair(kind, i, j)))
        .collect()
}
