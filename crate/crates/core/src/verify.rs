//! Classification of trees against the toricness theorems and exact
//! end-to-end checks of the generators and parametrizations they provide.

use crate::coords::{g_derived_laplacian_map, reduced_laplacian_map, CoordError, CoordinateMap};
use crate::graph::{derive_graph, star_decomposition_with_hint, StarDecomposition};
use crate::ideal::{generators_for, Binomial, GeneratorSet, IdealError};
use crate::matrix::{invert_exact, pattern_contains, sample_point, MatrixError, MatrixPattern};
use crate::monomial::{evaluate_map, exponent_rank, in_kernel, path_map, MapError, MonomialMap};
use crate::tree::{ColoredTree, NodeId, TreeError};
use crate::vars::VarKind;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

pub const WARN_NON_ADJACENT: &str = "non-adjacent internal color merge (conjecturally non-toric)";
pub const WARN_NON_VERTEX_REGULAR: &str = "non-vertex-regular complete graph (conjecturally non-toric)";

/// Parameter values for round trips: numerator in `1..=THETA_NUMERATOR_BOUND`,
/// denominator in `1..=THETA_DENOMINATOR_BOUND`.
pub const THETA_NUMERATOR_BOUND: i64 = 1_000;
pub const THETA_DENOMINATOR_BOUND: i64 = 100;

/// Failures listed per check before truncation.
const MAX_LISTED_FAILURES: usize = 20;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("not applicable: {}", .0.join("; "))]
    NotApplicable(Vec<String>),
    #[error("internal nodes sharing color `{0}` are not adjacent")]
    NonAdjacentMerge(String),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Coord(#[from] CoordError),
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Map(#[from] MapError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Theorem {
    ThmColoredComplete,
    ThmBlockUncolored,
    ThmMain,
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeSummary {
    pub n_leaves: usize,
    pub internal_nodes: Vec<NodeId>,
    pub zeroed: Vec<NodeId>,
    pub colors: usize,
    pub leaf_colors_distinct: bool,
}

impl TreeSummary {
    fn of(t: &ColoredTree) -> Self {
        TreeSummary {
            n_leaves: t.n_leaves(),
            internal_nodes: t.internal_nodes().to_vec(),
            zeroed: t.zeroed().iter().copied().collect(),
            colors: t.color_tokens().len(),
            leaf_colors_distinct: t.leaf_colors_distinct(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphProperties {
    pub edges: usize,
    pub connected: bool,
    pub complete: bool,
    pub vertex_regular: bool,
    pub block: bool,
    pub four_point: bool,
    pub star: Option<StarDecomposition>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub tree: TreeSummary,
    /// Internal nodes after merging adjacent same-colored ones, when any merged.
    pub contracted_internal_nodes: Option<Vec<NodeId>>,
    pub graph: GraphProperties,
    pub theorem: Theorem,
    pub coordinates: Option<VarKind>,
    pub reasons: Vec<String>,
    pub warnings: Vec<String>,
}

impl ClassificationReport {
    pub fn applicable(&self) -> bool {
        self.theorem != Theorem::None
    }
}

/// Merges each class of same-colored internal nodes into its topmost node.
/// Every class must be connected in the tree.
pub fn contract_internal_colors(t: &ColoredTree) -> Result<ColoredTree, VerifyError> {
    let mut classes: BTreeMap<&str, Vec<NodeId>> = BTreeMap::new();
    for &v in t.internal_nodes() {
        if let Some(c) = t.color(v) {
            classes.entry(c).or_default().push(v);
        }
    }
    let mut rep: BTreeMap<NodeId, NodeId> = BTreeMap::new();
    for (tok, members) in &classes {
        if members.len() < 2 {
            continue;
        }
        let set: BTreeSet<NodeId> = members.iter().copied().collect();
        let tops: Vec<NodeId> = members
            .iter()
            .copied()
            .filter(|&v| !set.contains(&t.parent(v).expect("non-root")))
            .collect();
        let [top] = tops.as_slice() else {
            return Err(VerifyError::NonAdjacentMerge(tok.to_string()));
        };
        for &v in members {
            rep.insert(v, *top);
        }
    }
    if rep.is_empty() {
        return Ok(t.clone());
    }
    let r = |v: NodeId| rep.get(&v).copied().unwrap_or(v);
    let mut parents = BTreeMap::new();
    let mut colors = BTreeMap::new();
    for v in t.nodes() {
        if r(v) != v {
            continue;
        }
        parents.insert(v, r(t.parent(v).expect("non-root")));
        if let Some(c) = t.color(v) {
            colors.insert(v, c.to_string());
        }
    }
    Ok(ColoredTree::from_parts(t.n_leaves(), &parents, &colors, t.zeroed())?)
}

/// Classifies after contracting adjacent internal color merges; returns the
/// report and the contracted tree (when contraction succeeded).
pub fn classify_with_tree(t: &ColoredTree) -> (ClassificationReport, Option<ColoredTree>) {
    let mut reasons = Vec::new();
    let mut warnings = Vec::new();
    let contracted = match contract_internal_colors(t) {
        Ok(c) => Some(c),
        Err(e) => {
            reasons.push(e.to_string());
            warnings.push(WARN_NON_ADJACENT.to_string());
            None
        }
    };
    let g = derive_graph(t);
    let connected = g.is_connected();
    let block = g.is_block_graph();
    let hint = match t.top_leaf_children().as_slice() {
        [c] => Some(*c),
        _ => None,
    };
    let star = if connected && block {
        star_decomposition_with_hint(&g, hint).ok().flatten()
    } else {
        None
    };
    let graph = GraphProperties {
        edges: g.edges().len(),
        connected,
        complete: g.is_complete(),
        vertex_regular: g.is_vertex_regular(),
        block,
        four_point: g.four_point_check(),
        star,
    };
    let zeroed = !t.zeroed().is_empty();

    let theorem = if contracted.is_none() {
        Theorem::None
    } else if !zeroed {
        if graph.vertex_regular {
            reasons.push("no zeroed nodes and the complete derived graph is vertex-regular".into());
            Theorem::ThmColoredComplete
        } else {
            reasons.push("not vertex-regular".into());
            warnings.push(WARN_NON_VERTEX_REGULAR.to_string());
            Theorem::None
        }
    } else if !connected {
        reasons.push("derived graph is disconnected".into());
        Theorem::None
    } else if !block {
        reasons.push("not block".into());
        Theorem::None
    } else if !graph.vertex_regular {
        reasons.push("not vertex-regular".into());
        Theorem::None
    } else if t.leaf_colors_distinct() {
        reasons.push("zeroed nodes, block derived graph, all node colors distinct".into());
        Theorem::ThmBlockUncolored
    } else {
        reasons.push("zeroed nodes, vertex-regular block derived graph".into());
        Theorem::ThmMain
    };
    let coordinates = (theorem != Theorem::None).then_some(if zeroed { VarKind::Q } else { VarKind::P });
    let contracted_internal_nodes = contracted
        .as_ref()
        .filter(|c| c.internal_nodes() != t.internal_nodes())
        .map(|c| c.internal_nodes().to_vec());
    let report = ClassificationReport {
        tree: TreeSummary::of(t),
        contracted_internal_nodes,
        graph,
        theorem,
        coordinates,
        reasons,
        warnings,
    };
    (report, contracted)
}

pub fn classify(t: &ColoredTree) -> ClassificationReport {
    classify_with_tree(t).0
}

/// Reduced Laplacian without zeroed nodes, the `G`-derived Laplacian otherwise.
pub fn coordinate_map_for(t: &ColoredTree) -> Result<CoordinateMap, VerifyError> {
    if t.zeroed().is_empty() {
        Ok(reduced_laplacian_map(t.n_leaves()))
    } else {
        Ok(g_derived_laplacian_map(&derive_graph(t))?)
    }
}

/// Everything needed to check a theorem-applicable tree.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub report: ClassificationReport,
    /// The tree with adjacent internal color classes contracted.
    pub tree: ColoredTree,
    pub pattern: MatrixPattern,
    pub map: CoordinateMap,
    pub generators: GeneratorSet,
    pub monomial: MonomialMap,
}

pub fn analyze(t: &ColoredTree) -> Result<Analysis, VerifyError> {
    let (report, contracted) = classify_with_tree(t);
    let tree = match contracted {
        Some(c) if report.applicable() => c,
        _ => return Err(VerifyError::NotApplicable(report.reasons.clone())),
    };
    Ok(Analysis {
        pattern: MatrixPattern::from_tree(&tree),
        map: coordinate_map_for(&tree)?,
        generators: generators_for(&tree)?,
        monomial: path_map(&tree)?,
        report,
        tree,
    })
}

/// The generators of the applicable theorem, in its coordinates.
pub fn combined_generators(t: &ColoredTree) -> Result<GeneratorSet, VerifyError> {
    Ok(analyze(t)?.generators)
}

/// Per-trial seeds drawn from a generator seeded with the master seed.
pub fn trial_seeds(seed: u64, trials: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials).map(|_| rng.gen()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelReport {
    pub checked: usize,
    pub in_kernel: usize,
    pub failures: Vec<String>,
    pub passed: bool,
}

pub fn kernel_report(m: &MonomialMap, generators: &[Binomial]) -> Result<KernelReport, VerifyError> {
    let mut failures = Vec::new();
    let mut ok = 0;
    for b in generators {
        if in_kernel(m, b)? {
            ok += 1;
        } else {
            failures.push(b.to_string());
        }
    }
    Ok(KernelReport {
        checked: generators.len(),
        in_kernel: ok,
        passed: failures.is_empty(),
        failures,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VanishingReport {
    pub trials: usize,
    pub seed: u64,
    pub generators: usize,
    pub evaluations: usize,
    pub nonzero: usize,
    pub vanishing_trials: usize,
    pub failures: Vec<String>,
    pub passed: bool,
}

/// Samples `K` in the pattern, maps `Σ = K⁻¹` to the target coordinates and
/// evaluates every generator there.
pub fn forward_vanishing_with(
    pattern: &MatrixPattern,
    map: &CoordinateMap,
    generators: &[Binomial],
    trials: usize,
    seed: u64,
) -> Result<VanishingReport, VerifyError> {
    let per_trial: Vec<Vec<String>> = trial_seeds(seed, trials)
        .into_par_iter()
        .enumerate()
        .map(|(k, s)| -> Result<Vec<String>, VerifyError> {
            let kmat = sample_point(pattern, s)?;
            let sigma = invert_exact(&kmat)?;
            let v = map.apply(&sigma)?;
            let mut bad = Vec::new();
            for b in generators {
                if !b.evaluate(&v)?.is_zero() {
                    bad.push(format!("trial {k}: {b}"));
                }
            }
            Ok(bad)
        })
        .collect::<Result<_, _>>()?;
    let nonzero = per_trial.iter().map(Vec::len).sum();
    Ok(VanishingReport {
        trials,
        seed,
        generators: generators.len(),
        evaluations: trials * generators.len(),
        nonzero,
        vanishing_trials: per_trial.iter().filter(|b| b.is_empty()).count(),
        failures: per_trial.into_iter().flatten().take(MAX_LISTED_FAILURES).collect(),
        passed: nonzero == 0,
    })
}

pub fn forward_vanishing(t: &ColoredTree, trials: usize, seed: u64) -> Result<VanishingReport, VerifyError> {
    let a = analyze(t)?;
    forward_vanishing_with(&a.pattern, &a.map, &a.generators.all(), trials, seed)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundtripReport {
    pub trials: usize,
    pub seed: u64,
    pub in_pattern: usize,
    pub skipped_singular: usize,
    pub failed: usize,
    pub passed: bool,
}

fn random_theta(params: &[String], seed: u64) -> BTreeMap<String, BigRational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    params
        .iter()
        .map(|p| {
            let num = rng.gen_range(1..=THETA_NUMERATOR_BOUND);
            let den = rng.gen_range(1..=THETA_DENOMINATOR_BOUND);
            (p.clone(), BigRational::new(BigInt::from(num), BigInt::from(den)))
        })
        .collect()
}

/// Evaluates the path map at random positive `θ`, maps back to `Σ` and checks
/// `Σ⁻¹` against the pattern. Singular `Σ` are skipped.
pub fn roundtrip_with(
    pattern: &MatrixPattern,
    map: &CoordinateMap,
    monomial: &MonomialMap,
    thetas: &[BTreeMap<String, BigRational>],
    seed: u64,
) -> Result<RoundtripReport, VerifyError> {
    let outcomes: Vec<Option<bool>> = thetas
        .par_iter()
        .map(|theta| -> Result<Option<bool>, VerifyError> {
            let v = evaluate_map(monomial, theta)?;
            let sigma = map.unapply(&v)?;
            match invert_exact(&sigma) {
                Ok(k) => Ok(Some(pattern_contains(pattern, &k))),
                Err(MatrixError::Singular) => Ok(None),
                Err(e) => Err(e.into()),
            }
        })
        .collect::<Result<_, _>>()?;
    let in_pattern = outcomes.iter().filter(|o| **o == Some(true)).count();
    let failed = outcomes.iter().filter(|o| **o == Some(false)).count();
    Ok(RoundtripReport {
        trials: thetas.len(),
        seed,
        in_pattern,
        skipped_singular: outcomes.len() - in_pattern - failed,
        failed,
        passed: failed == 0,
    })
}

pub fn roundtrip_analysis(a: &Analysis, trials: usize, seed: u64) -> Result<RoundtripReport, VerifyError> {
    let thetas: Vec<_> = trial_seeds(seed, trials)
        .into_iter()
        .map(|s| random_theta(&a.monomial.parameters, s))
        .collect();
    roundtrip_with(&a.pattern, &a.map, &a.monomial, &thetas, seed)
}

pub fn roundtrip_parametrization(t: &ColoredTree, trials: usize, seed: u64) -> Result<RoundtripReport, VerifyError> {
    roundtrip_analysis(&analyze(t)?, trials, seed)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionReport {
    pub exponent_rank: usize,
    pub occurring_parameters: usize,
    pub colors: usize,
    pub passed: bool,
}

pub fn dimension_of(m: &MonomialMap, colors: usize) -> DimensionReport {
    let rank = exponent_rank(m);
    let occurring = m.occurring_parameters().len();
    DimensionReport {
        exponent_rank: rank,
        occurring_parameters: occurring,
        colors,
        passed: rank == occurring,
    }
}

pub fn dimension_report(t: &ColoredTree) -> Result<DimensionReport, VerifyError> {
    let a = analyze(t)?;
    Ok(dimension_of(&a.monomial, a.tree.color_tokens().len()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub classification: ClassificationReport,
    pub generators: usize,
    pub kernel: KernelReport,
    pub forward_vanishing: VanishingReport,
    pub roundtrip: RoundtripReport,
    pub dimension: DimensionReport,
    pub passed: bool,
}

/// Kernel membership, forward vanishing, round trip and rank, from one seed.
/// The round trip uses the seed after the forward trials' seed stream.
pub fn run_verification(t: &ColoredTree, trials: usize, seed: u64) -> Result<VerificationReport, VerifyError> {
    let a = analyze(t)?;
    let gens = a.generators.all();
    let kernel = kernel_report(&a.monomial, &gens)?;
    let forward = forward_vanishing_with(&a.pattern, &a.map, &gens, trials, seed)?;
    let roundtrip = roundtrip_analysis(&a, trials, seed.wrapping_add(1))?;
    let dimension = dimension_of(&a.monomial, a.tree.color_tokens().len());
    let passed = kernel.passed && forward.passed && roundtrip.passed && dimension.passed;
    Ok(VerificationReport {
        classification: a.report,
        generators: gens.len(),
        kernel,
        forward_vanishing: forward,
        roundtrip,
        dimension,
        passed,
    })
}
