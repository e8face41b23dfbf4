//! Linear coordinate changes from covariance entries `σ_ij` to Laplacian
//! coordinates `p_ij` / `q_ij`.

use crate::graph::ColoredGraph;
use crate::linalg;
use crate::matrix::RationalSymMatrix;
use crate::rational::{format_rational, format_rows, parse_rows, ParseRationalError};
use crate::vars::{coordinate_count, pair_vars, sigma_index, sigma_vars, Assignment, Var, VarKind};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoordError {
    #[error("coordinate map is not invertible")]
    NotInvertible,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("target kind must be p or q")]
    BadKind,
    #[error("malformed map document: {0}")]
    Malformed(String),
    #[error(transparent)]
    Rational(#[from] ParseRationalError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// A rational linear combination of variables.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinearForm(BTreeMap<Var, BigRational>);

impl LinearForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn var(v: Var) -> Self {
        let mut f = Self::default();
        f.add(v, BigRational::one());
        f
    }

    pub fn add(&mut self, v: Var, c: BigRational) {
        let e = self.0.entry(v).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&v);
        }
    }

    pub fn add_form(&mut self, other: &LinearForm, scale: &BigRational) {
        for (v, c) in &other.0 {
            self.add(*v, c * scale);
        }
    }

    pub fn negated(&self) -> Self {
        LinearForm(self.0.iter().map(|(v, c)| (*v, -c)).collect())
    }

    pub fn coefficient(&self, v: &Var) -> BigRational {
        self.0.get(v).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> &BTreeMap<Var, BigRational> {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn evaluate(&self, point: &impl Assignment) -> Option<BigRational> {
        let mut acc = BigRational::zero();
        for (v, c) in &self.0 {
            acc += c * point.value(v)?;
        }
        Some(acc)
    }
}

impl fmt::Display for LinearForm {
    /// `q01 - q13`, `2*q13`, `-1/2*q12 + q23`; the zero form prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (k, (v, c)) in self.0.iter().enumerate() {
            let mag = c.abs();
            match (k, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if mag.is_one() {
                write!(f, "{v}")?;
            } else if mag.is_integer() {
                write!(f, "{}*{v}", mag.numer())?;
            } else {
                write!(f, "{}/{}*{v}", mag.numer(), mag.denom())?;
            }
        }
        Ok(())
    }
}

/// The weighted complete graph on `{0, 1..n}` built from `G`, its graph
/// Laplacian, and the Laplacian with row and column 0 removed.
#[derive(Debug, Clone)]
pub struct GammaGraph {
    pub n: usize,
    /// Weights keyed by `(i, j)` with `0 ≤ i < j ≤ n`.
    pub weights: BTreeMap<(usize, usize), LinearForm>,
    /// `(n+1) × (n+1)`, indexed from 0.
    pub laplacian: Vec<Vec<LinearForm>>,
}

impl GammaGraph {
    /// Rows and columns `1..=n` of the Laplacian.
    pub fn reduced(&self) -> Vec<Vec<LinearForm>> {
        self.laplacian[1..].iter().map(|r| r[1..].to_vec()).collect()
    }
}

fn laplacian_of(n: usize, weights: &BTreeMap<(usize, usize), LinearForm>) -> Vec<Vec<LinearForm>> {
    let mut lap = vec![vec![LinearForm::zero(); n + 1]; n + 1];
    let one = BigRational::one();
    for (&(i, j), w) in weights {
        lap[i][i].add_form(w, &one);
        lap[j][j].add_form(w, &one);
        lap[i][j] = w.negated();
        lap[j][i] = w.negated();
    }
    lap
}

/// Weights of `Γ(G)` in `kind` variables:
///
/// * edge `{i,j}` of `G`: `x_ij`; non-edge: `−x_ij`;
/// * `{0,i}` for `i` not universal: `x_0i − Σ_{j universal} x_ij`;
/// * `{0,i}` for `i` universal: `x_0i − Σ_{j not universal} x_ij`.
///
/// Empty sums are zero.
pub fn gamma_graph_in(g: &ColoredGraph, kind: VarKind) -> GammaGraph {
    let n = g.n();
    let universal: Vec<bool> = std::iter::once(false)
        .chain(g.vertices().map(|v| g.degree(v) + 1 == n))
        .collect();
    let minus = -BigRational::one();
    let mut weights = BTreeMap::new();
    for i in 1..=n {
        for j in i + 1..=n {
            let x = LinearForm::var(Var::pair(kind, i, j));
            weights.insert((i, j), if g.has_edge(i, j) { x } else { x.negated() });
        }
    }
    for i in 1..=n {
        let mut w = LinearForm::var(Var::pair(kind, 0, i));
        for j in 1..=n {
            if j != i && universal[j] != universal[i] {
                w.add(Var::pair(kind, i, j), minus.clone());
            }
        }
        weights.insert((0, i), w);
    }
    let laplacian = laplacian_of(n, &weights);
    GammaGraph { n, weights, laplacian }
}

pub fn gamma_graph(g: &ColoredGraph) -> GammaGraph {
    gamma_graph_in(g, VarKind::Q)
}

/// An invertible linear map from `σ_ij` (1 ≤ i ≤ j ≤ n) to `x_ij`
/// (0 ≤ i < j ≤ n), both in their lexicographic orders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateMap {
    n: usize,
    target: VarKind,
    forward: Vec<Vec<BigRational>>,
    inverse: Vec<Vec<BigRational>>,
}

impl CoordinateMap {
    /// `forward[r][c]` is the coefficient of the `c`-th `σ` in the `r`-th target coordinate.
    pub fn from_rows(n: usize, target: VarKind, forward: Vec<Vec<BigRational>>) -> Result<Self, CoordError> {
        if !target.is_pair_kind() {
            return Err(CoordError::BadKind);
        }
        let big_n = coordinate_count(n);
        if forward.len() != big_n || forward.iter().any(|r| r.len() != big_n) {
            return Err(CoordError::DimensionMismatch {
                expected: big_n,
                got: forward.len(),
            });
        }
        let inverse = linalg::inverse(&forward).ok_or(CoordError::NotInvertible)?;
        Ok(CoordinateMap {
            n,
            target,
            forward,
            inverse,
        })
    }

    /// Builds the map whose inverse is given: `σ = B x`, so the map is `B⁻¹`.
    fn from_inverse(n: usize, target: VarKind, inverse: Vec<Vec<BigRational>>) -> Result<Self, CoordError> {
        let forward = linalg::inverse(&inverse).ok_or(CoordError::NotInvertible)?;
        Ok(CoordinateMap {
            n,
            target,
            forward,
            inverse,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn target(&self) -> VarKind {
        self.target
    }

    pub fn forward(&self) -> &[Vec<BigRational>] {
        &self.forward
    }

    pub fn inverse(&self) -> &[Vec<BigRational>] {
        &self.inverse
    }

    /// Each target coordinate as a linear form in `σ`.
    pub fn forward_forms(&self) -> Vec<(Var, LinearForm)> {
        let sig = sigma_vars(self.n);
        pair_vars(self.target, self.n)
            .into_iter()
            .zip(&self.forward)
            .map(|(x, row)| {
                let mut f = LinearForm::zero();
                for (s, c) in sig.iter().zip(row) {
                    f.add(*s, c.clone());
                }
                (x, f)
            })
            .collect()
    }

    pub fn apply(&self, s: &RationalSymMatrix) -> Result<CoordVector, CoordError> {
        if s.n() != self.n {
            return Err(CoordError::DimensionMismatch {
                expected: self.n,
                got: s.n(),
            });
        }
        let sig: Vec<BigRational> = sigma_vars(self.n).iter().map(|v| s.get(v.i, v.j).clone()).collect();
        Ok(CoordVector {
            kind: self.target,
            n: self.n,
            values: linalg::mat_vec(&self.forward, &sig),
        })
    }

    pub fn unapply(&self, v: &CoordVector) -> Result<RationalSymMatrix, CoordError> {
        if v.n != self.n || v.values.len() != coordinate_count(self.n) {
            return Err(CoordError::DimensionMismatch {
                expected: self.n,
                got: v.n,
            });
        }
        let sig = linalg::mat_vec(&self.inverse, &v.values);
        let mut rows = vec![vec![BigRational::zero(); self.n]; self.n];
        for i in 1..=self.n {
            for j in i..=self.n {
                let x = sig[sigma_index(self.n, i, j)].clone();
                rows[i - 1][j - 1] = x.clone();
                rows[j - 1][i - 1] = x;
            }
        }
        Ok(RationalSymMatrix::new(rows).expect("filled symmetrically"))
    }

    pub fn to_document(&self) -> CoordinateMapDocument {
        CoordinateMapDocument {
            n: self.n,
            source: VarKind::Sigma,
            target: self.target,
            source_order: sigma_vars(self.n),
            target_order: pair_vars(self.target, self.n),
            matrix: format_rows(&self.forward),
        }
    }

    pub fn from_document(doc: &CoordinateMapDocument) -> Result<Self, CoordError> {
        if doc.source != VarKind::Sigma {
            return Err(CoordError::Malformed("source must be sigma".into()));
        }
        if doc.source_order != sigma_vars(doc.n) || doc.target_order != pair_vars(doc.target, doc.n) {
            return Err(CoordError::Malformed("variable orders must be lexicographic".into()));
        }
        Self::from_rows(doc.n, doc.target, parse_rows(&doc.matrix)?)
    }
}

/// JSON form of a [`CoordinateMap`]: the forward matrix as `"num/den"` strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoordinateMapDocument {
    pub n: usize,
    pub source: VarKind,
    pub target: VarKind,
    pub source_order: Vec<Var>,
    pub target_order: Vec<Var>,
    pub matrix: Vec<Vec<String>>,
}

/// `p_ij = −σ_ij` for `1 ≤ i < j`, `p_0i = Σ_j σ_ij`.
pub fn reduced_laplacian_map(n: usize) -> CoordinateMap {
    let big_n = coordinate_count(n);
    let mut forward = vec![vec![BigRational::zero(); big_n]; big_n];
    for (r, x) in pair_vars(VarKind::P, n).iter().enumerate() {
        if x.i == 0 {
            for j in 1..=n {
                forward[r][sigma_index(n, x.j, j)] = BigRational::one();
            }
        } else {
            forward[r][sigma_index(n, x.i, x.j)] = -BigRational::one();
        }
    }
    CoordinateMap::from_rows(n, VarKind::P, forward).expect("reduced Laplacian is invertible")
}

/// Reads `σ = reduced Laplacian of Γ(G)` as a linear system and inverts it.
pub fn g_derived_laplacian_map(g: &ColoredGraph) -> Result<CoordinateMap, CoordError> {
    laplacian_map_in(g, VarKind::Q)
}

pub(crate) fn laplacian_map_in(g: &ColoredGraph, kind: VarKind) -> Result<CoordinateMap, CoordError> {
    let n = g.n();
    let reduced = gamma_graph_in(g, kind).reduced();
    let targets = pair_vars(kind, n);
    let inverse: Vec<Vec<BigRational>> = sigma_vars(n)
        .iter()
        .map(|s| {
            let form = &reduced[s.i - 1][s.j - 1];
            targets.iter().map(|x| form.coefficient(x)).collect()
        })
        .collect();
    CoordinateMap::from_inverse(n, kind, inverse)
}

/// Values of the target coordinates in their lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordVector {
    pub kind: VarKind,
    pub n: usize,
    pub values: Vec<BigRational>,
}

impl CoordVector {
    pub fn get(&self, v: &Var) -> Option<&BigRational> {
        if v.kind != self.kind {
            return None;
        }
        v.index(self.n).map(|k| &self.values[k])
    }

    pub fn to_map(&self) -> BTreeMap<String, String> {
        pair_vars(self.kind, self.n)
            .iter()
            .zip(&self.values)
            .map(|(v, x)| (v.to_string(), format_rational(x)))
            .collect()
    }
}

impl Assignment for CoordVector {
    fn value(&self, v: &Var) -> Option<BigRational> {
        self.get(v).cloned()
    }
}
