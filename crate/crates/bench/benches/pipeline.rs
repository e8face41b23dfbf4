use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use cztree_core::ideal::cherry_binomials;
use cztree_core::matrix::{invert_exact, sample_point, MatrixPattern};
use cztree_core::random::{random_tree, RandomTreeConfig};
use cztree_core::verify::{analyze, classify, forward_vanishing_with};
use cztree_core::ColoredTree;
use std::hint::black_box;

const ZEROED_STAR: &str = include_str!("../../../fixtures/zeroed_star.json");

fn sized(n: usize, seed: u64) -> ColoredTree {
    random_tree(
        seed,
        &RandomTreeConfig {
            min_leaves: n,
            max_leaves: n,
            ..RandomTreeConfig::default()
        },
    )
}

fn tree_queries(c: &mut Criterion) {
    let mut g = c.benchmark_group("lca_all_pairs");
    for n in [8, 32, 128] {
        let t = sized(n, 1);
        g.bench_with_input(BenchmarkId::from_parameter(n), &t, |b, t| {
            b.iter(|| {
                let mut acc = 0;
                for i in 0..=n {
                    for j in 0..=n {
                        acc += t.lca(i, j).unwrap();
                    }
                }
                acc
            })
        });
    }
    g.finish();

    let mut g = c.benchmark_group("cherry_binomials");
    for n in [6, 10, 14] {
        let t = sized(n, 2);
        g.bench_with_input(BenchmarkId::from_parameter(n), &t, |b, t| {
            b.iter(|| cherry_binomials(black_box(t)))
        });
    }
    g.finish();
}

fn exact_linear_algebra(c: &mut Criterion) {
    let mut g = c.benchmark_group("invert_exact");
    for n in [4, 8, 12] {
        let m = sample_point(&MatrixPattern::from_tree(&sized(n, 3)), 0).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            b.iter(|| invert_exact(black_box(m)).unwrap())
        });
    }
    g.finish();
}

fn pipeline(c: &mut Criterion) {
    let t = ColoredTree::parse(ZEROED_STAR).unwrap();
    let a = analyze(&t).unwrap();
    let gens = a.generators.all();
    c.bench_function("forward_vanishing_zeroed_star_10_trials", |b| {
        b.iter(|| forward_vanishing_with(&a.pattern, &a.map, &gens, 10, 0).unwrap())
    });
    let trees: Vec<ColoredTree> = (0..50).map(|s| random_tree(s, &RandomTreeConfig::default())).collect();
    c.bench_function("classify_50_random_trees", |b| {
        b.iter(|| trees.iter().map(classify).filter(|r| r.applicable()).count())
    });
}

criterion_group!(benches, tree_queries, exact_linear_algebra, pipeline);
criterion_main!(benches);
