//! Binomials and the generator families: cherry quadrics of the tree, 2×2
//! minors of block graphs, and the linear relations of the vertex-regular
//! completion.

use crate::graph::{derive_graph, one_clique_separated_quadruples, ColoredGraph, GraphError};
use crate::tree::ColoredTree;
use crate::vars::{pair_vars, Assignment, Var, VarKind};
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IdealError {
    #[error("cannot parse binomial `{0}`")]
    Parse(String),
    #[error("no value for variable {0}")]
    MissingVariable(Var),
    #[error("variable {0} is outside the coordinate ring")]
    OutsideUniverse(Var),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A monomial as sorted `(variable, exponent)` pairs with positive exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn from_factors(factors: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut m: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in factors {
            *m.entry(v).or_default() += e;
        }
        Monomial(m.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn product(vars: &[Var]) -> Self {
        Self::from_factors(vars.iter().map(|&v| (v, 1)))
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn map_vars(&self, f: impl Fn(Var) -> Var) -> Self {
        Self::from_factors(self.0.iter().map(|&(v, e)| (f(v), e)))
    }

    pub fn evaluate(&self, point: &impl Assignment) -> Result<BigRational, IdealError> {
        let mut acc = BigRational::one();
        for &(v, e) in &self.0 {
            let x = point.value(&v).ok_or(IdealError::MissingVariable(v))?;
            for _ in 0..e {
                acc *= &x;
            }
        }
        Ok(acc)
    }
}

/// Lex order with `x01 > x02 > …`: the first variable (in ascending `Var`
/// order) on which the exponents differ decides.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&&(va, ea)), Some(&&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match ea.cmp(&eb) {
                        Ordering::Equal => {
                            a.next();
                            b.next();
                        }
                        ord => return ord,
                    },
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, &(v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Monomial {
    type Err = IdealError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || IdealError::Parse(s.to_string());
        let s = s.trim();
        if s == "1" {
            return Ok(Monomial::one());
        }
        let mut factors = Vec::new();
        for part in s.split('*') {
            let part = part.trim();
            let (name, exp) = match part.split_once('^') {
                Some((a, b)) => (a.trim(), b.trim().parse::<u32>().map_err(|_| err())?),
                None => (part, 1),
            };
            let v: Var = name.parse().map_err(|_| err())?;
            factors.push((v, exp));
        }
        Ok(Monomial::from_factors(factors))
    }
}

/// `lead − trail` with `lead > trail` in lex order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Binomial {
    lead: Monomial,
    trail: Monomial,
}

impl Binomial {
    /// `a − b` up to sign; `None` when the two monomials coincide.
    pub fn new(a: Monomial, b: Monomial) -> Option<Self> {
        match a.cmp(&b) {
            Ordering::Greater => Some(Binomial { lead: a, trail: b }),
            Ordering::Less => Some(Binomial { lead: b, trail: a }),
            Ordering::Equal => None,
        }
    }

    /// `a1·a2 − b1·b2`.
    pub fn quadric(a: (Var, Var), b: (Var, Var)) -> Option<Self> {
        Self::new(Monomial::product(&[a.0, a.1]), Monomial::product(&[b.0, b.1]))
    }

    pub fn linear(a: Var, b: Var) -> Option<Self> {
        Self::new(Monomial::product(&[a]), Monomial::product(&[b]))
    }

    pub fn lead(&self) -> &Monomial {
        &self.lead
    }

    pub fn trail(&self) -> &Monomial {
        &self.trail
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.lead.0.iter().chain(&self.trail.0).map(|&(v, _)| v).collect()
    }

    pub fn map_vars(&self, f: impl Fn(Var) -> Var) -> Option<Self> {
        Self::new(self.lead.map_vars(&f), self.trail.map_vars(&f))
    }

    pub fn evaluate(&self, point: &impl Assignment) -> Result<BigRational, IdealError> {
        Ok(self.lead.evaluate(point)? - self.trail.evaluate(point)?)
    }
}

impl fmt::Display for Binomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} - {}", self.lead, self.trail)
    }
}

impl FromStr for Binomial {
    type Err = IdealError;

    /// Accepts `a - b`, `-a + b`, `a + -b` style with `*` and `^` in monomials.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || IdealError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (first_neg, body) = match compact.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, compact.strip_prefix('+').unwrap_or(&compact)),
        };
        let pos = body.find(['+', '-']).ok_or_else(err)?;
        let (a, rest) = body.split_at(pos);
        let second_neg = rest.starts_with('-');
        if first_neg == second_neg {
            return Err(err());
        }
        let b = &rest[1..];
        Binomial::new(a.parse()?, b.parse()?).ok_or_else(err)
    }
}

impl Serialize for Binomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Pairing of a quadruple `{a,b,c,d}` into two pairs.
fn pairings(q: [usize; 4]) -> [((usize, usize), (usize, usize)); 3] {
    let [a, b, c, d] = q;
    [((a, b), (c, d)), ((a, c), (b, d)), ((a, d), (b, c))]
}

/// For the split `{i,j}|{k,l}`: `x_ik·x_jl − x_il·x_jk`.
fn split_binomial(kind: VarKind, (i, j): (usize, usize), (k, l): (usize, usize)) -> Option<Binomial> {
    let x = |a, b| Var::pair(kind, a, b);
    Binomial::quadric((x(i, k), x(j, l)), (x(i, l), x(j, k)))
}

/// Quadrics of the tree's quartets over `{0, 1..n}` in `kind` variables. A
/// resolved quartet (one pairing has strictly smaller distance sum) gives
/// one binomial; an unresolved quartet gives one for each pairing.
pub fn cherry_binomials_in(t: &ColoredTree, kind: VarKind) -> Vec<Binomial> {
    let n = t.n_leaves();
    let d = |a, b| t.distance(a, b).expect("leaves exist");
    let mut out = BTreeSet::new();
    for a in 0..=n {
        for b in a + 1..=n {
            for c in b + 1..=n {
                for e in c + 1..=n {
                    let ps = pairings([a, b, c, e]);
                    let sums: Vec<usize> = ps.iter().map(|&(p, q)| d(p.0, p.1) + d(q.0, q.1)).collect();
                    let min = *sums.iter().min().expect("three sums");
                    let minimal: Vec<usize> = (0..3).filter(|&k| sums[k] == min).collect();
                    let chosen: Vec<usize> = if minimal.len() == 1 { minimal } else { vec![0, 1, 2] };
                    for k in chosen {
                        out.extend(split_binomial(kind, ps[k].0, ps[k].1));
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

pub fn cherry_binomials(t: &ColoredTree) -> Vec<Binomial> {
    cherry_binomials_in(t, VarKind::P)
}

/// `σ_ik·σ_jl − σ_il·σ_jk` for every separated pair of row and column pairs.
pub fn block_minor_binomials(g: &ColoredGraph) -> Result<Vec<Binomial>, IdealError> {
    let s = Var::sigma;
    let out: BTreeSet<Binomial> = one_clique_separated_quadruples(g)?
        .into_iter()
        .filter_map(|((i, j), (k, l))| Binomial::quadric((s(i, k), s(j, l)), (s(i, l), s(j, k))))
        .collect();
    Ok(out.into_iter().collect())
}

/// Linear relations among same-colored vertices `i, j`: `σ_ik − σ_jk` for
/// `k ∉ {i,j}` and the diagonal `σ_ii − σ_jj`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CompletionBinomials {
    pub off_diagonal: Vec<Binomial>,
    pub diagonal: Vec<Binomial>,
}

impl CompletionBinomials {
    pub fn all(&self) -> Vec<Binomial> {
        let set: BTreeSet<&Binomial> = self.off_diagonal.iter().chain(&self.diagonal).collect();
        set.into_iter().cloned().collect()
    }
}

pub fn completion_binomials(g: &ColoredGraph) -> CompletionBinomials {
    let n = g.n();
    let mut off = BTreeSet::new();
    let mut diag = BTreeSet::new();
    for class in g.vertex_classes().values() {
        for (a, &i) in class.iter().enumerate() {
            for &j in &class[a + 1..] {
                for k in (1..=n).filter(|&k| k != i && k != j) {
                    off.extend(Binomial::linear(Var::sigma(i, k), Var::sigma(j, k)));
                }
                diag.extend(Binomial::linear(Var::sigma(i, i), Var::sigma(j, j)));
            }
        }
    }
    CompletionBinomials {
        off_diagonal: off.into_iter().collect(),
        diagonal: diag.into_iter().collect(),
    }
}

/// `σ_ii ↦ x_0i`, `σ_ij ↦ x_ij`.
pub fn embed_var(v: Var, kind: VarKind) -> Var {
    debug_assert_eq!(v.kind, VarKind::Sigma);
    if v.i == v.j {
        Var::pair(kind, 0, v.i)
    } else {
        Var::pair(kind, v.i, v.j)
    }
}

/// Substitutes `σ` variables by Laplacian-side variables. The diagonal
/// relation `σ_ii − σ_jj` becomes `x_0i − x_0j`, which is the reduced form
/// modulo the off-diagonal relations.
pub fn embed(b: &Binomial, kind: VarKind, n: usize) -> Result<Binomial, IdealError> {
    if let Some(v) = b
        .vars()
        .into_iter()
        .find(|v| v.kind != VarKind::Sigma || !v.in_universe(n))
    {
        return Err(IdealError::OutsideUniverse(v));
    }
    Ok(b.map_vars(|v| embed_var(v, kind)).expect("embedding is injective"))
}

/// Generator families in a common coordinate system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorSet {
    pub kind: VarKind,
    pub n: usize,
    pub cherry: Vec<Binomial>,
    pub block: Vec<Binomial>,
    pub completion: Vec<Binomial>,
}

impl GeneratorSet {
    /// Union of all families, deduplicated and sorted.
    pub fn all(&self) -> Vec<Binomial> {
        let set: BTreeSet<&Binomial> = self.cherry.iter().chain(&self.block).chain(&self.completion).collect();
        set.into_iter().cloned().collect()
    }

    pub fn to_text(&self) -> String {
        self.all().iter().map(|b| format!("{b}\n")).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let coords = pair_vars(self.kind, self.n);
        let exps = |m: &Monomial| -> Vec<u32> {
            coords
                .iter()
                .map(|v| m.factors().iter().find(|f| f.0 == *v).map_or(0, |f| f.1))
                .collect()
        };
        let gens: Vec<serde_json::Value> = self
            .all()
            .iter()
            .map(|b| {
                serde_json::json!({
                    "binomial": b.to_string(),
                    "lead": exps(b.lead()),
                    "trail": exps(b.trail()),
                })
            })
            .collect();
        serde_json::json!({
            "coordinates": self.kind,
            "n": self.n,
            "variables": coords,
            "counts": {
                "cherry": self.cherry.len(),
                "block": self.block.len(),
                "completion": self.completion.len(),
            },
            "generators": gens,
        })
    }

    /// Macaulay2 ring and ideal definition.
    pub fn to_m2(&self) -> String {
        let m2var = |v: &Var| format!("{}_({},{})", v.kind.prefix(), v.i, v.j);
        let m2mono = |m: &Monomial| -> String {
            m.factors()
                .iter()
                .map(|(v, e)| if *e == 1 { m2var(v) } else { format!("{}^{e}", m2var(v)) })
                .collect::<Vec<_>>()
                .join("*")
        };
        let vars: Vec<String> = pair_vars(self.kind, self.n).iter().map(m2var).collect();
        let gens: Vec<String> = self
            .all()
            .iter()
            .map(|b| format!("    {} - {}", m2mono(b.lead()), m2mono(b.trail())))
            .collect();
        let body = if gens.is_empty() {
            "    0_R".to_string()
        } else {
            gens.join(",\n")
        };
        format!("R = QQ[{}];\nI = ideal(\n{}\n);\n", vars.join(", "), body)
    }
}

/// The three families for a tree whose internal colors are already distinct:
/// cherry quadrics and completion relations in `p` when nothing is zeroed;
/// cherry quadrics, block minors and completion relations in `q` otherwise.
pub fn generators_for(t: &ColoredTree) -> Result<GeneratorSet, IdealError> {
    let n = t.n_leaves();
    let g = derive_graph(t);
    let zeroed = !t.zeroed().is_empty();
    let kind = if zeroed { VarKind::Q } else { VarKind::P };
    let cherry = cherry_binomials_in(t, kind);
    let block = if zeroed {
        block_minor_binomials(&g)?
            .iter()
            .map(|b| embed(b, kind, n))
            .collect::<Result<BTreeSet<_>, _>>()?
            .into_iter()
            .collect()
    } else {
        Vec::new()
    };
    let completion = completion_binomials(&g)
        .all()
        .iter()
        .map(|b| embed(b, kind, n))
        .collect::<Result<BTreeSet<_>, _>>()?
        .into_iter()
        .collect();
    Ok(GeneratorSet {
        kind,
        n,
        cherry,
        block,
        completion,
    })
}
