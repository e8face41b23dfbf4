use cztree_core::coords::{g_derived_laplacian_map, reduced_laplacian_map};
use cztree_core::graph::{completion, derive_graph, one_clique_separated_quadruples, ColoredGraph, Edge};
use cztree_core::ideal::cherry_binomials;
use cztree_core::matrix::{
    invert_exact, jordan_product, pattern_contains, sample_point, MatrixPattern, RationalSymMatrix,
};
use cztree_core::monomial::evaluate_map;
use cztree_core::random::{random_tree, RandomTreeConfig};
use cztree_core::tree::{ColoredTree, NodeId, ROOT};
use cztree_core::vars::Var;
use cztree_core::verify::{analyze, run_verification};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use std::collections::{BTreeMap, BTreeSet};

fn tree(seed: u64) -> ColoredTree {
    random_tree(seed, &RandomTreeConfig::default())
}

fn ancestors(t: &ColoredTree, mut v: NodeId) -> Vec<NodeId> {
    let mut out = vec![v];
    while v != ROOT {
        v = t.parent(v).unwrap();
        out.push(v);
    }
    out
}

fn lca_oracle(t: &ColoredTree, i: NodeId, j: NodeId) -> NodeId {
    let aj: BTreeSet<NodeId> = ancestors(t, j).into_iter().collect();
    ancestors(t, i).into_iter().find(|v| aj.contains(v)).unwrap()
}

fn graph_strategy(max_n: usize) -> impl Strategy<Value = ColoredGraph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        prop::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let all: Vec<Edge> = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect();
            let es = all.into_iter().zip(bits).filter(|(_, b)| *b).map(|(e, _)| e);
            ColoredGraph::uncolored(n, es).unwrap()
        })
    })
}

fn colored_vertices_strategy(max_n: usize) -> impl Strategy<Value = ColoredGraph> {
    (2..=max_n).prop_flat_map(|n| {
        prop::collection::vec(0..3u8, n).prop_map(|cs| {
            let vc = cs.iter().map(|c| format!("c{c}")).collect();
            ColoredGraph::new(vc, BTreeMap::new()).unwrap()
        })
    })
}

/// Fixed-point closure of `{i,k} ~ {j,k}` over same-colored `i, j`.
fn closure_oracle(g: &ColoredGraph) -> BTreeSet<BTreeSet<Edge>> {
    let n = g.n();
    let e = |a: usize, b: usize| (a.min(b), a.max(b));
    let mut class: BTreeMap<Edge, usize> = BTreeMap::new();
    for i in 1..=n {
        for j in i + 1..=n {
            let k = class.len();
            class.insert((i, j), k);
        }
    }
    let mut changed = true;
    while changed {
        changed = false;
        for i in 1..=n {
            for j in 1..=n {
                if i == j || g.vertex_color(i) != g.vertex_color(j) {
                    continue;
                }
                for k in (1..=n).filter(|&k| k != i && k != j) {
                    let (a, b) = (class[&e(i, k)], class[&e(j, k)]);
                    if a != b {
                        for v in class.values_mut() {
                            if *v == b {
                                *v = a;
                            }
                        }
                        changed = true;
                    }
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, BTreeSet<Edge>> = BTreeMap::new();
    for (edge, c) in class {
        groups.entry(c).or_default().insert(edge);
    }
    groups.into_values().collect()
}

/// Minors of Σ_{A∪c, B∪c} over every cut vertex and component bipartition.
fn bipartition_oracle(g: &ColoredGraph) -> BTreeSet<(Edge, Edge)> {
    let mut out = BTreeSet::new();
    let n = g.n();
    for c in 1..=n {
        // components of G − c by flood fill
        let mut label = vec![usize::MAX; n + 1];
        let mut k = 0;
        for s in (1..=n).filter(|&s| s != c) {
            if label[s] != usize::MAX {
                continue;
            }
            let mut stack = vec![s];
            label[s] = k;
            while let Some(v) = stack.pop() {
                for &w in g.neighbors(v) {
                    if w != c && label[w] == usize::MAX {
                        label[w] = k;
                        stack.push(w);
                    }
                }
            }
            k += 1;
        }
        if k < 2 {
            continue;
        }
        for mask in 1..(1u32 << k) - 1 {
            let side = |v: usize| v == c || mask & (1 << label[v]) != 0;
            let a: Vec<usize> = (1..=n).filter(|&v| side(v)).collect();
            let b: Vec<usize> = (1..=n).filter(|&v| v == c || !side(v)).collect();
            for x in 0..a.len() {
                for y in x + 1..a.len() {
                    for z in 0..b.len() {
                        for w in z + 1..b.len() {
                            let r = (a[x], a[y]);
                            let s = (b[z], b[w]);
                            out.insert((r.min(s), r.max(s)));
                        }
                    }
                }
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn lca_matches_ancestor_sets(seed in any::<u64>()) {
        let t = tree(seed);
        for i in 0..=t.n_leaves() {
            for j in 0..=t.n_leaves() {
                prop_assert_eq!(t.lca(i, j).unwrap(), t.lca(j, i).unwrap());
                prop_assert_eq!(t.lca(i, j).unwrap(), lca_oracle(&t, i, j));
            }
        }
    }

    #[test]
    fn path_lengths_and_four_point(seed in any::<u64>()) {
        let t = tree(seed);
        let n = t.n_leaves();
        for i in 0..=n {
            for j in i + 1..=n {
                prop_assert_eq!(t.path_edges(i, j).unwrap().len(), t.distance(i, j).unwrap());
            }
        }
        let d = |a, b| t.distance(a, b).unwrap();
        for a in 0..=n { for b in a + 1..=n { for c in b + 1..=n { for e in c + 1..=n {
            let mut s = [d(a, b) + d(c, e), d(a, c) + d(b, e), d(a, e) + d(b, c)];
            s.sort_unstable();
            prop_assert_eq!(s[1], s[2]);
        }}}}
    }

    #[test]
    fn height_two_nodes_have_internal_depth(seed in any::<u64>()) {
        let t = tree(seed);
        for &v in t.internal_nodes() {
            let h = t.height(v).unwrap();
            let leaf_children = t.children(v).iter().any(|&c| t.is_leaf(c));
            prop_assert_eq!(h == 1, leaf_children);
            if h >= 2 {
                prop_assert!(t.children(v).iter().all(|&c| t.is_internal(c)));
            }
        }
    }

    #[test]
    fn block_characterizations_agree(g in graph_strategy(9)) {
        prop_assert_eq!(g.is_block_graph(), g.four_point_check());
    }

    #[test]
    fn separated_quadruples_cover_all_bipartitions(g in graph_strategy(7)) {
        if g.is_connected() && g.is_block_graph() {
            prop_assert_eq!(one_clique_separated_quadruples(&g).unwrap(), bipartition_oracle(&g));
        }
    }

    #[test]
    fn completion_is_the_closure(g in colored_vertices_strategy(7)) {
        let c = completion(&g);
        let got: BTreeSet<BTreeSet<Edge>> = c
            .edge_classes()
            .into_values()
            .map(|v| v.into_iter().collect())
            .collect();
        prop_assert_eq!(got, closure_oracle(&g));
    }

    #[test]
    fn tree_and_graph_patterns_agree(seed in any::<u64>()) {
        let t = tree(seed);
        prop_assert_eq!(MatrixPattern::from_tree(&t), MatrixPattern::from_graph(&derive_graph(&t)));
    }

    #[test]
    fn inversion_is_an_involution(seed in any::<u64>()) {
        let p = MatrixPattern::from_tree(&tree(seed));
        let m = sample_point(&p, seed).unwrap();
        let inv = invert_exact(&m).unwrap();
        prop_assert_eq!(invert_exact(&inv).unwrap(), m);
    }

    #[test]
    fn completion_patterns_are_jordan_closed(seed in any::<u64>()) {
        let g = derive_graph(&tree(seed));
        let p = MatrixPattern::from_graph(&completion(&g));
        let a = sample_point(&p, seed).unwrap();
        let b = sample_point(&p, seed.wrapping_add(1)).unwrap();
        prop_assert!(pattern_contains(&p, &jordan_product(&a, &b).unwrap()));
    }

    #[test]
    fn coordinate_maps_round_trip(seed in any::<u64>()) {
        let t = tree(seed);
        let n = t.n_leaves();
        let s = sample_point(&MatrixPattern::from_tree(&random_tree(seed ^ 1, &RandomTreeConfig {
            min_leaves: n, max_leaves: n, ..RandomTreeConfig::default()
        })), seed).unwrap();
        for map in [reduced_laplacian_map(n), g_derived_laplacian_map(&derive_graph(&t)).unwrap()] {
            prop_assert_eq!(map.unapply(&map.apply(&s).unwrap()).unwrap(), s.clone());
        }
    }

    #[test]
    fn cherry_splits_follow_deepest_lca(seed in any::<u64>()) {
        let t = tree(seed);
        let n = t.n_leaves();
        let depth = |a, b| t.depth(t.lca(a, b).unwrap()).unwrap();
        let got: BTreeSet<String> = cherry_binomials(&t).iter().map(|b| b.to_string()).collect();
        let mut expected = BTreeSet::new();
        for a in 0..=n { for b in a + 1..=n { for c in b + 1..=n { for e in c + 1..=n {
            let pairings = [((a, b), (c, e)), ((a, c), (b, e)), ((a, e), (b, c))];
            let best = pairings.iter().map(|&(x, y)| depth(x.0, x.1).max(depth(y.0, y.1))).max().unwrap();
            let hits: Vec<usize> = (0..3)
                .filter(|&k| { let (x, y) = pairings[k]; depth(x.0, x.1) == best || depth(y.0, y.1) == best })
                .collect();
            let chosen = if hits.len() == 1 { hits } else { vec![0, 1, 2] };
            for k in chosen {
                let ((i, j), (k2, l)) = pairings[k];
                let b = cztree_core::ideal::Binomial::quadric((Var::p(i, k2), Var::p(j, l)), (Var::p(i, l), Var::p(j, k2))).unwrap();
                expected.insert(b.to_string());
            }
        }}}}
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn generators_vanish_on_parametrized_points(seed in any::<u64>(), vals in prop::collection::vec(1i64..500, 16)) {
        let t = tree(seed);
        if let Ok(a) = analyze(&t) {
            let theta: BTreeMap<String, BigRational> = a.monomial.parameters.iter().enumerate()
                .map(|(k, p)| (p.clone(), BigRational::from_integer(BigInt::from(vals[k % vals.len()] + k as i64))))
                .collect();
            let v = evaluate_map(&a.monomial, &theta).unwrap();
            for b in a.generators.all() {
                prop_assert!(b.evaluate(&v).unwrap().is_zero(), "{}", b);
            }
        }
    }
}

#[test]
fn reports_are_reproducible() {
    for seed in 0..20 {
        let t = tree(seed);
        if analyze(&t).is_ok() {
            let a = serde_json::to_string(&run_verification(&t, 3, seed).unwrap()).unwrap();
            let b = serde_json::to_string(&run_verification(&t, 3, seed).unwrap()).unwrap();
            assert_eq!(a, b);
        }
    }
}

#[test]
fn sampled_identity_is_identity() {
    let one = RationalSymMatrix::identity(3);
    assert!(invert_exact(&one).unwrap() == one);
}
