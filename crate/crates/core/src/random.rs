//! Seeded random colored trees with zeroed nodes, for property checks and
//! benchmarks.

use crate::tree::{ColoredTree, NodeId, ROOT};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomTreeConfig {
    pub min_leaves: usize,
    pub max_leaves: usize,
    /// Chance that a non-top internal node is zeroed.
    pub zero_prob: f64,
    /// Chance that a leaf copies the color of a sibling leaf.
    pub sibling_color_prob: f64,
    /// Chance that a leaf takes a color from a small shared palette.
    pub palette_prob: f64,
    /// Chance that an internal node copies its parent's color.
    pub adjacent_merge_prob: f64,
    /// Chance per tree of one merge between two arbitrary internal nodes.
    pub arbitrary_merge_prob: f64,
}

impl Default for RandomTreeConfig {
    fn default() -> Self {
        RandomTreeConfig {
            min_leaves: 2,
            max_leaves: 8,
            zero_prob: 0.3,
            sibling_color_prob: 0.3,
            palette_prob: 0.1,
            adjacent_merge_prob: 0.1,
            arbitrary_merge_prob: 0.1,
        }
    }
}

/// Builds a tree by repeatedly joining two or three current roots under a new
/// internal node, then colors and zeroes it.
pub fn random_tree(seed: u64, cfg: &RandomTreeConfig) -> ColoredTree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(cfg.min_leaves.max(2)..=cfg.max_leaves.max(2));
    let mut parents: BTreeMap<NodeId, NodeId> = BTreeMap::new();
    let mut active: Vec<NodeId> = (1..=n).collect();
    let mut next = n + 1;
    while active.len() > 1 {
        let k = rng.gen_range(2..=active.len().min(3));
        active.shuffle(&mut rng);
        for v in active.drain(..k) {
            parents.insert(v, next);
        }
        active.push(next);
        next += 1;
    }
    let top = active[0];
    parents.insert(top, ROOT);
    let internal: Vec<NodeId> = (n + 1..next).collect();

    let zeroed: BTreeSet<NodeId> = internal
        .iter()
        .copied()
        .filter(|&v| v != top && rng.gen_bool(cfg.zero_prob))
        .collect();

    let mut colors: BTreeMap<NodeId, String> = BTreeMap::new();
    for leaf in 1..=n {
        colors.insert(leaf, format!("L{leaf}"));
    }
    for leaf in 1..=n {
        if rng.gen_bool(cfg.palette_prob) {
            colors.insert(leaf, format!("P{}", rng.gen_range(0..3)));
        } else if rng.gen_bool(cfg.sibling_color_prob) {
            let pa = parents[&leaf];
            let first_sibling = (1..leaf).find(|&s| parents[&s] == pa);
            if let Some(s) = first_sibling {
                let c = colors[&s].clone();
                colors.insert(leaf, c);
            }
        }
    }
    for &v in &internal {
        if !zeroed.contains(&v) {
            colors.insert(v, format!("N{v}"));
        }
    }
    // parents carry larger ids, so a descending pass lets merges chain downward
    for &v in internal.iter().rev() {
        let pa = parents[&v];
        if pa != ROOT && !zeroed.contains(&v) && !zeroed.contains(&pa) && rng.gen_bool(cfg.adjacent_merge_prob) {
            let c = colors[&pa].clone();
            colors.insert(v, c);
        }
    }
    let live: Vec<NodeId> = internal.iter().copied().filter(|v| !zeroed.contains(v)).collect();
    if live.len() >= 2 && rng.gen_bool(cfg.arbitrary_merge_prob) {
        let pick: Vec<NodeId> = live.choose_multiple(&mut rng, 2).copied().collect();
        let c = colors[&pick[0]].clone();
        colors.insert(pick[1], c);
    }
    ColoredTree::from_parts(n, &parents, &colors, &zeroed).expect("generated trees are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_valid() {
        let cfg = RandomTreeConfig::default();
        for seed in 0..200 {
            let t = random_tree(seed, &cfg);
            assert_eq!(t, random_tree(seed, &cfg));
            assert!((2..=8).contains(&t.n_leaves()));
            assert!(!t.is_zeroed(t.top()));
        }
    }

    #[test]
    fn covers_the_interesting_cases() {
        let cfg = RandomTreeConfig::default();
        let trees: Vec<ColoredTree> = (0..300).map(|s| random_tree(s, &cfg)).collect();
        assert!(trees.iter().any(|t| t.zeroed().is_empty()));
        assert!(trees.iter().any(|t| !t.zeroed().is_empty()));
        assert!(trees.iter().any(|t| !t.leaf_colors_distinct()));
    }
}
