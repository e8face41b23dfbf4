//! Monomial parametrizations by path products of node parameters.

use crate::coords::CoordVector;
use crate::graph::{derive_graph, star_decomposition_with_hint};
use crate::ideal::{Binomial, Monomial};
use crate::linalg;
use crate::tree::ColoredTree;
use crate::vars::{pair_vars, Var, VarKind};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MapError {
    #[error("derived graph is not a star: {0}")]
    NotStar(String),
    #[error("variable {0} is not a coordinate of this map")]
    UnknownVariable(Var),
    #[error("no value for parameter `{0}`")]
    MissingParameter(String),
    #[error("malformed map: {0}")]
    Malformed(String),
}

/// Exponent matrix of a monomial map: row per coordinate, column per parameter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonomialMap {
    pub kind: VarKind,
    pub n: usize,
    pub coordinates: Vec<Var>,
    pub parameters: Vec<String>,
    pub exponents: Vec<Vec<u32>>,
}

impl MonomialMap {
    pub fn new(kind: VarKind, n: usize, parameters: Vec<String>, exponents: Vec<Vec<u32>>) -> Result<Self, MapError> {
        let coordinates = pair_vars(kind, n);
        if exponents.len() != coordinates.len() || exponents.iter().any(|r| r.len() != parameters.len()) {
            return Err(MapError::Malformed("exponent matrix has the wrong shape".into()));
        }
        Ok(MonomialMap {
            kind,
            n,
            coordinates,
            parameters,
            exponents,
        })
    }

    fn row(&self, v: &Var) -> Result<&[u32], MapError> {
        if v.kind != self.kind {
            return Err(MapError::UnknownVariable(*v));
        }
        let k = v.index(self.n).ok_or(MapError::UnknownVariable(*v))?;
        Ok(&self.exponents[k])
    }

    /// Total parameter exponent of the image of `m`.
    pub fn image(&self, m: &Monomial) -> Result<Vec<u64>, MapError> {
        let mut acc = vec![0u64; self.parameters.len()];
        for (v, e) in m.factors() {
            for (a, x) in acc.iter_mut().zip(self.row(v)?) {
                *a += u64::from(*x) * u64::from(*e);
            }
        }
        Ok(acc)
    }

    /// Human-readable image of a coordinate, e.g. `t[1]*t[5]*t[7]`.
    pub fn describe(&self, v: &Var) -> Result<String, MapError> {
        let parts: Vec<String> = self
            .row(v)?
            .iter()
            .zip(&self.parameters)
            .filter(|(e, _)| **e > 0)
            .map(|(e, p)| {
                if *e == 1 {
                    format!("t[{p}]")
                } else {
                    format!("t[{p}]^{e}")
                }
            })
            .collect();
        Ok(if parts.is_empty() { "1".into() } else { parts.join("*") })
    }

    /// Parameters with a nonzero column.
    pub fn occurring_parameters(&self) -> Vec<&str> {
        self.parameters
            .iter()
            .enumerate()
            .filter(|(c, _)| self.exponents.iter().any(|r| r[*c] > 0))
            .map(|(_, p)| p.as_str())
            .collect()
    }
}

/// Generalized path map: `x_ij ↦ ∏ θ_λ(k)` over path edges `(ℓ, k)` with
/// `k` not zeroed. With zeroed nodes present the coordinates are `q` and the
/// leaf `c` hanging off the top node gets `q_0c ↦ θ_λ(c)²`.
pub fn path_map(t: &ColoredTree) -> Result<MonomialMap, MapError> {
    let n = t.n_leaves();
    let zeroed = !t.zeroed().is_empty();
    let kind = if zeroed { VarKind::Q } else { VarKind::P };
    let parameters: Vec<String> = t.color_tokens().into_iter().map(String::from).collect();
    let col: BTreeMap<&str, usize> = parameters.iter().enumerate().map(|(k, p)| (p.as_str(), k)).collect();

    let mut exponents = Vec::new();
    for x in pair_vars(kind, n) {
        let mut row = vec![0u32; parameters.len()];
        for (_, k) in t.path_edges(x.i, x.j).expect("distinct nodes") {
            if let Some(c) = t.color(k) {
                row[col[c]] += 1;
            }
        }
        exponents.push(row);
    }

    if zeroed {
        let c = center_leaf(t)?;
        let row = &mut exponents[Var::q(0, c).index(n).expect("in range")];
        row.iter_mut().for_each(|e| *e = 0);
        row[col[t.color(c).expect("leaf colors")]] = 2;
    }
    MonomialMap::new(kind, n, parameters, exponents)
}

/// The unique leaf child of the top node, required to be the star center.
pub fn center_leaf(t: &ColoredTree) -> Result<usize, MapError> {
    let g = derive_graph(t);
    let leaf = match t.top_leaf_children().as_slice() {
        [c] => *c,
        other => return Err(MapError::NotStar(format!("top node has {} leaf children", other.len()))),
    };
    match star_decomposition_with_hint(&g, Some(leaf)) {
        Ok(Some(s)) if s.center == leaf => Ok(leaf),
        Ok(Some(s)) => Err(MapError::NotStar(format!("center {} is not leaf {leaf}", s.center))),
        Ok(None) => Err(MapError::NotStar("no central vertex".into())),
        Err(e) => Err(MapError::NotStar(e.to_string())),
    }
}

/// Both terms of `b` have the same image exponent vector.
pub fn in_kernel(m: &MonomialMap, b: &Binomial) -> Result<bool, MapError> {
    Ok(m.image(b.lead())? == m.image(b.trail())?)
}

pub fn exponent_rank(m: &MonomialMap) -> usize {
    let rows: Vec<Vec<BigInt>> = m
        .exponents
        .iter()
        .map(|r| r.iter().map(|&e| BigInt::from(e)).collect())
        .collect();
    linalg::integer_rank(&rows)
}

/// Coordinate values at the parameter point `theta`.
pub fn evaluate_map(m: &MonomialMap, theta: &BTreeMap<String, BigRational>) -> Result<CoordVector, MapError> {
    let vals: Vec<&BigRational> = m
        .parameters
        .iter()
        .map(|p| theta.get(p).ok_or_else(|| MapError::MissingParameter(p.clone())))
        .collect::<Result<_, _>>()?;
    let values = m
        .exponents
        .iter()
        .map(|row| {
            let mut acc = BigRational::one();
            for (x, &e) in vals.iter().zip(row) {
                for _ in 0..e {
                    acc *= *x;
                }
            }
            acc
        })
        .collect();
    Ok(CoordVector {
        kind: m.kind,
        n: m.n,
        values,
    })
}
