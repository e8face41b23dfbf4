//! Colored Brownian motion tree models with zeroed nodes: trees, derived
//! graphs, Laplacian coordinate changes, toric generators and exact checks.

pub mod coords;
pub mod graph;
pub mod ideal;
pub mod linalg;
pub mod matrix;
pub mod monomial;
pub mod random;
pub mod rational;
pub mod tree;
pub mod vars;
pub mod verify;

pub use coords::{g_derived_laplacian_map, gamma_graph, reduced_laplacian_map, CoordVector, CoordinateMap, LinearForm};
pub use graph::{completion, derive_graph, star_decomposition, ColoredGraph, StarDecomposition};
pub use ideal::{Binomial, GeneratorSet, Monomial};
pub use matrix::{invert_exact, jordan_product, pattern_contains, sample_point, MatrixPattern, RationalSymMatrix};
pub use monomial::{path_map, MonomialMap};
pub use tree::{ColoredTree, TreeDocument};
pub use vars::{Var, VarKind};
pub use verify::{classify, ClassificationReport, Theorem, VerificationReport};
