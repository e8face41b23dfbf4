//! Symbolic symmetric-matrix patterns and exact rational symmetric matrices.

use crate::graph::ColoredGraph;
use crate::linalg;
use crate::rational::{format_rows, parse_rows, ParseRationalError};
use crate::tree::ColoredTree;
use crate::vars::{Assignment, Var, VarKind};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

pub const SAMPLE_NUMERATOR_BOUND: i64 = 1_000_000;
pub const SAMPLE_DENOMINATOR_BOUND: i64 = 1_000;
pub const SAMPLE_ATTEMPTS: usize = 64;

#[derive(Debug, Error)]
pub enum MatrixError {
    #[error("matrix is singular")]
    Singular,
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("no invertible sample found after {0} attempts")]
    SamplingFailed(usize),
    #[error("malformed matrix: {0}")]
    Malformed(String),
    #[error("no value for class `{0}`")]
    MissingClass(String),
    #[error(transparent)]
    Rational(#[from] ParseRationalError),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EntryClass {
    Zero,
    Class(String),
}

impl fmt::Display for EntryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntryClass::Zero => write!(f, "0"),
            EntryClass::Class(c) => write!(f, "t[{c}]"),
        }
    }
}

/// A linear space of symmetric matrices given by zero entries and equal-entry
/// classes. Indices in the public API are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixPattern {
    n: usize,
    entries: Vec<Vec<EntryClass>>,
}

impl MatrixPattern {
    /// `entries` must be square and symmetric with no zero on the diagonal.
    pub fn new(entries: Vec<Vec<EntryClass>>) -> Result<Self, MatrixError> {
        let n = entries.len();
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(MatrixError::Malformed("pattern is not square".into()));
            }
            if row[i] == EntryClass::Zero {
                return Err(MatrixError::Malformed(format!("zero diagonal entry {}", i + 1)));
            }
            for j in 0..i {
                if entries[j][i] != row[j] {
                    return Err(MatrixError::Malformed("pattern is not symmetric".into()));
                }
            }
        }
        Ok(MatrixPattern { n, entries })
    }

    /// `M_ii = t[λ(i)]`, `M_ij = t[λ(lca(i,j))]`, or 0 when the lca is zeroed.
    pub fn from_tree(t: &ColoredTree) -> Self {
        let n = t.n_leaves();
        let entries = (1..=n)
            .map(|i| {
                (1..=n)
                    .map(|j| {
                        let l = t.lca(i, j).expect("leaves exist");
                        t.color(l)
                            .map_or(EntryClass::Zero, |c| EntryClass::Class(c.to_string()))
                    })
                    .collect()
            })
            .collect();
        MatrixPattern { n, entries }
    }

    /// Diagonal from vertex colors, off-diagonal from edge colors, 0 off edges.
    pub fn from_graph(g: &ColoredGraph) -> Self {
        let n = g.n();
        let entries = (1..=n)
            .map(|i| {
                (1..=n)
                    .map(|j| {
                        if i == j {
                            EntryClass::Class(g.vertex_color(i).to_string())
                        } else {
                            g.edge_color(i, j)
                                .map_or(EntryClass::Zero, |c| EntryClass::Class(c.to_string()))
                        }
                    })
                    .collect()
            })
            .collect();
        MatrixPattern { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &EntryClass {
        &self.entries[i - 1][j - 1]
    }

    /// Distinct class tokens, sorted.
    pub fn classes(&self) -> Vec<String> {
        let set: BTreeSet<&String> = self
            .entries
            .iter()
            .flatten()
            .filter_map(|e| match e {
                EntryClass::Class(c) => Some(c),
                EntryClass::Zero => None,
            })
            .collect();
        set.into_iter().cloned().collect()
    }

    pub fn instantiate(&self, values: &BTreeMap<String, BigRational>) -> Result<RationalSymMatrix, MatrixError> {
        let mut rows = vec![vec![BigRational::zero(); self.n]; self.n];
        for (i, row) in self.entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                if let EntryClass::Class(c) = e {
                    rows[i][j] = values
                        .get(c)
                        .cloned()
                        .ok_or_else(|| MatrixError::MissingClass(c.clone()))?;
                }
            }
        }
        Ok(RationalSymMatrix { n: self.n, rows })
    }

    /// Text rendering, one row per line.
    pub fn render(&self) -> String {
        self.entries
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// An exactly symmetric `n × n` rational matrix. Indices in the public API
/// are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSymMatrix {
    n: usize,
    rows: Vec<Vec<BigRational>>,
}

impl RationalSymMatrix {
    pub fn new(rows: Vec<Vec<BigRational>>) -> Result<Self, MatrixError> {
        let n = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(MatrixError::Malformed("matrix is not square".into()));
            }
            for j in 0..i {
                if rows[j][i] != row[j] {
                    return Err(MatrixError::Malformed(format!(
                        "entries ({},{}) and ({},{}) differ",
                        i + 1,
                        j + 1,
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        Ok(RationalSymMatrix { n, rows })
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            BigRational::one()
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        RationalSymMatrix { n, rows }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.rows[i - 1][j - 1]
    }

    /// Sets both `(i,j)` and `(j,i)`.
    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.rows[i - 1][j - 1] = v.clone();
        self.rows[j - 1][i - 1] = v;
    }

    pub fn rows(&self) -> &[Vec<BigRational>] {
        &self.rows
    }

    pub fn determinant(&self) -> BigRational {
        linalg::determinant(&self.rows)
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        format_rows(&self.rows)
    }

    pub fn from_strings(rows: &[Vec<String>]) -> Result<Self, MatrixError> {
        Self::new(parse_rows(rows)?)
    }
}

impl Assignment for RationalSymMatrix {
    fn value(&self, v: &Var) -> Option<BigRational> {
        (v.kind == VarKind::Sigma && v.in_universe(self.n)).then(|| self.get(v.i, v.j).clone())
    }
}

impl Serialize for RationalSymMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalSymMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        Self::from_strings(&rows).map_err(serde::de::Error::custom)
    }
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let num = rng.gen_range(-SAMPLE_NUMERATOR_BOUND..=SAMPLE_NUMERATOR_BOUND);
    let den = rng.gen_range(1..=SAMPLE_DENOMINATOR_BOUND);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Draws one rational per class (in sorted class order) until the matrix is
/// invertible.
pub fn sample_point(p: &MatrixPattern, seed: u64) -> Result<RationalSymMatrix, MatrixError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let classes = p.classes();
    for _ in 0..SAMPLE_ATTEMPTS {
        let values: BTreeMap<String, BigRational> =
            classes.iter().map(|c| (c.clone(), random_rational(&mut rng))).collect();
        let m = p.instantiate(&values)?;
        if !m.determinant().is_zero() {
            return Ok(m);
        }
    }
    Err(MatrixError::SamplingFailed(SAMPLE_ATTEMPTS))
}

pub fn invert_exact(m: &RationalSymMatrix) -> Result<RationalSymMatrix, MatrixError> {
    let inv = linalg::inverse(&m.rows).ok_or(MatrixError::Singular)?;
    // the inverse of a symmetric matrix is symmetric; enforce it bit-exactly
    RationalSymMatrix::new(inv)
}

/// `X • Y = (XY + YX) / 2`.
pub fn jordan_product(x: &RationalSymMatrix, y: &RationalSymMatrix) -> Result<RationalSymMatrix, MatrixError> {
    if x.n != y.n {
        return Err(MatrixError::SizeMismatch(x.n, y.n));
    }
    let xy = linalg::mat_mul(&x.rows, &y.rows);
    let yx = linalg::mat_mul(&y.rows, &x.rows);
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let rows = xy
        .iter()
        .zip(&yx)
        .map(|(a, b)| a.iter().zip(b).map(|(u, v)| (u + v) * &half).collect())
        .collect();
    RationalSymMatrix::new(rows)
}

/// Zero entries are exactly 0 and entries of one class are exactly equal.
pub fn pattern_contains(p: &MatrixPattern, m: &RationalSymMatrix) -> bool {
    if p.n != m.n {
        return false;
    }
    let mut seen: BTreeMap<&str, &BigRational> = BTreeMap::new();
    for i in 0..p.n {
        for j in i..p.n {
            let v = &m.rows[i][j];
            match &p.entries[i][j] {
                EntryClass::Zero => {
                    if !v.is_zero() {
                        return false;
                    }
                }
                EntryClass::Class(c) => {
                    if let Some(prev) = seen.insert(c, v) {
                        if prev != v {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{completion, derive_graph};
    use crate::rational::{int, rat};
    use crate::tree::fixtures::*;

    fn cls(s: &str) -> EntryClass {
        if s == "0" {
            EntryClass::Zero
        } else {
            EntryClass::Class(s.to_string())
        }
    }

    /// Determinant by cofactor expansion.
    fn det_oracle(m: &[Vec<BigRational>]) -> BigRational {
        let n = m.len();
        if n == 1 {
            return m[0][0].clone();
        }
        let mut acc = BigRational::zero();
        for j in 0..n {
            let minor: Vec<Vec<BigRational>> = m[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let term = &m[0][j] * det_oracle(&minor);
            acc = if j % 2 == 0 { acc + term } else { acc - term };
        }
        acc
    }

    /// Inverse through the adjugate: `(−1)^{i+j} det(M without row j, col i) / det(M)`.
    fn adjugate_inverse(m: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
        let n = m.len();
        let d = det_oracle(m);
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let minor: Vec<Vec<BigRational>> = (0..n)
                            .filter(|&r| r != j)
                            .map(|r| (0..n).filter(|&c| c != i).map(|c| m[r][c].clone()).collect())
                            .collect();
                        let cof = det_oracle(&minor);
                        let signed = if (i + j) % 2 == 0 { cof } else { -cof };
                        signed / &d
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn zeroed_star_pattern() {
        let p = MatrixPattern::from_tree(&zeroed_star());
        let expected = [
            ["cyan", "red", "0", "blue"],
            ["red", "cyan", "0", "blue"],
            ["0", "0", "yellow", "blue"],
            ["blue", "blue", "blue", "green"],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(p.entry(i + 1, j + 1), &cls(expected[i][j]));
            }
        }
        assert_eq!(p, MatrixPattern::from_graph(&derive_graph(&zeroed_star())));
    }

    #[test]
    fn uncolored_pattern_and_single_leaf() {
        let p = MatrixPattern::from_tree(&uncolored());
        let expected = [
            ["1", "5", "7", "7"],
            ["5", "2", "7", "7"],
            ["7", "7", "3", "6"],
            ["7", "7", "6", "4"],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(p.entry(i + 1, j + 1), &cls(expected[i][j]));
            }
        }
        let one = ColoredTree::parse(r#"{"n_leaves": 1, "parents": {"1": 0}, "colors": {"1": "a"}}"#).unwrap();
        assert_eq!(MatrixPattern::from_tree(&one).classes(), vec!["a".to_string()]);
    }

    #[test]
    fn samples_belong_to_pattern() {
        let p = MatrixPattern::from_tree(&zeroed_star());
        let m = sample_point(&p, 1).unwrap();
        assert!(pattern_contains(&p, &m));
        assert!(!m.determinant().is_zero());
        assert_eq!(sample_point(&p, 1).unwrap(), m);
        let mut bad = m.clone();
        let v = bad.get(1, 4) + rat(1, 7);
        bad.set(1, 4, v);
        assert!(!pattern_contains(&p, &bad));
    }

    #[test]
    fn identity_assignment() {
        let p = MatrixPattern::from_tree(&uncolored());
        let mut values: BTreeMap<String, BigRational> = p.classes().into_iter().map(|c| (c, int(0))).collect();
        for leaf in ["1", "2", "3", "4"] {
            values.insert(leaf.to_string(), int(1));
        }
        assert_eq!(p.instantiate(&values).unwrap(), RationalSymMatrix::identity(4));
    }

    #[test]
    fn forced_singularity_is_reported() {
        let row = vec![cls("a"); 3];
        let p = MatrixPattern::new(vec![row.clone(), row.clone(), row]).unwrap();
        assert!(matches!(sample_point(&p, 0), Err(MatrixError::SamplingFailed(64))));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(
            invert_exact(&RationalSymMatrix::identity(3)).unwrap(),
            RationalSymMatrix::identity(3)
        );
        let d = RationalSymMatrix::new(vec![vec![int(2), int(0)], vec![int(0), int(4)]]).unwrap();
        let di = invert_exact(&d).unwrap();
        assert_eq!(di.get(1, 1), &rat(1, 2));
        assert_eq!(di.get(2, 2), &rat(1, 4));
        let m = sample_point(&MatrixPattern::from_tree(&zeroed_star()), 7).unwrap();
        let inv = invert_exact(&m).unwrap();
        assert_eq!(inv.rows(), adjugate_inverse(m.rows()).as_slice());
        assert_eq!(invert_exact(&inv).unwrap(), m);
        let singular = RationalSymMatrix::new(vec![vec![int(1), int(1)], vec![int(1), int(1)]]).unwrap();
        assert!(matches!(invert_exact(&singular), Err(MatrixError::Singular)));
    }

    #[test]
    fn jordan_product_examples() {
        let p = MatrixPattern::from_tree(&uncolored());
        let x = sample_point(&p, 3).unwrap();
        let i = RationalSymMatrix::identity(4);
        assert_eq!(jordan_product(&x, &i).unwrap(), x);
        let sq = RationalSymMatrix::new(linalg::mat_mul(x.rows(), x.rows())).unwrap();
        assert_eq!(jordan_product(&x, &x).unwrap(), sq);
        assert!(matches!(
            jordan_product(&x, &RationalSymMatrix::identity(2)),
            Err(MatrixError::SizeMismatch(4, 2))
        ));

        let g = derive_graph(&with_colors(&uncolored(), &[(1, "y"), (2, "y")], &[]));
        let cp = MatrixPattern::from_graph(&completion(&g));
        let a = sample_point(&cp, 11).unwrap();
        let b = sample_point(&cp, 12).unwrap();
        assert!(pattern_contains(&cp, &jordan_product(&a, &b).unwrap()));
    }

    #[test]
    fn json_uses_rational_strings() {
        let m = RationalSymMatrix::new(vec![vec![rat(1, 2), int(3)], vec![int(3), int(-1)]]).unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, r#"[["1/2","3/1"],["3/1","-1/1"]]"#);
        assert_eq!(serde_json::from_str::<RationalSymMatrix>(&json).unwrap(), m);
        assert!(serde_json::from_str::<RationalSymMatrix>(r#"[["1","2"],["3","1"]]"#).is_err());
    }
}
