//! Command-line front end: classify trees, emit generators, run verification
//! suites and export coordinate changes.

use clap::{Parser, Subcommand, ValueEnum};
use cztree_core::coords::{g_derived_laplacian_map, gamma_graph};
use cztree_core::graph::{derive_graph, ColoredGraph, GraphError};
use cztree_core::ideal::{Binomial, IdealError};
use cztree_core::monomial::in_kernel;
use cztree_core::tree::{ColoredTree, TreeError};
use cztree_core::verify::{analyze, classify, run_verification, VerifyError};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Clone, Parser)]
#[command(
    name = "cztree",
    version,
    about = "Toric generators for colored trees with zeroed nodes"
)]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Classify the derived graph and report which theorem applies.
    Analyze {
        #[arg(long)]
        tree: PathBuf,
    },
    /// Emit the combined binomial generators.
    Generators {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long, value_enum, default_value_t = ExportFormat::Text)]
        format: ExportFormat,
    },
    /// Kernel membership, forward vanishing, round trips and rank.
    Verify {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Weights of the weighted complete graph and the derived coordinate change.
    Laplacian {
        #[arg(long, conflicts_with = "graph", required_unless_present = "graph")]
        tree: Option<PathBuf>,
        #[arg(long)]
        graph: Option<PathBuf>,
    },
    /// Check binomials from a file against the tree's monomial map.
    Kernel {
        #[arg(long)]
        tree: PathBuf,
        /// One binomial per line (`#` starts a comment), or JSON from
        /// `generators --format json`.
        #[arg(long)]
        generators: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Text,
    Json,
    M2Script,
}

/// Process exit codes.
pub mod exit {
    pub const PASS: u8 = 0;
    pub const CHECK_FAILED: u8 = 1;
    pub const NOT_APPLICABLE: u8 = 2;
    pub const INPUT_ERROR: u8 = 3;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Tree { path: PathBuf, source: TreeError },
    #[error("{path}: {source}")]
    Graph { path: PathBuf, source: GraphError },
    #[error("{path}: {message}")]
    Generators { path: PathBuf, message: String },
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error(transparent)]
    Verify(VerifyError),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Tree { .. } | CliError::Graph { .. } | CliError::Generators { .. } => {
                exit::INPUT_ERROR
            }
            CliError::NotApplicable(_) => exit::NOT_APPLICABLE,
            CliError::Verify(_) | CliError::Json(_) => exit::CHECK_FAILED,
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::NotApplicable(reasons) => CliError::NotApplicable(reasons.join("; ")),
            other => CliError::Verify(other),
        }
    }
}

/// What a command produced: the artifact text and whether its checks passed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub body: String,
    pub code: u8,
}

impl Outcome {
    fn pass(body: String) -> Self {
        Outcome { body, code: exit::PASS }
    }

    fn checked(body: String, passed: bool) -> Self {
        let code = if passed { exit::PASS } else { exit::CHECK_FAILED };
        Outcome { body, code }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_tree(path: &Path) -> Result<ColoredTree, CliError> {
    ColoredTree::parse(&read(path)?).map_err(|source| CliError::Tree {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_graph(path: &Path) -> Result<ColoredGraph, CliError> {
    ColoredGraph::parse(&read(path)?).map_err(|source| CliError::Graph {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads binomials from plain text or from the JSON generator export.
pub fn load_binomials(path: &Path) -> Result<Vec<Binomial>, CliError> {
    let text = read(path)?;
    let bad = |message: String| CliError::Generators {
        path: path.to_path_buf(),
        message,
    };
    let lines: Vec<String> = if text.trim_start().starts_with('{') {
        let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
        v["generators"]
            .as_array()
            .ok_or_else(|| bad("missing `generators` array".into()))?
            .iter()
            .map(|g| {
                g["binomial"]
                    .as_str()
                    .map(str::to_string)
                    .ok_or_else(|| bad("missing `binomial`".into()))
            })
            .collect::<Result<_, _>>()?
    } else {
        text.lines()
            .map(|l| l.split('#').next().unwrap_or("").trim().to_string())
            .filter(|l| !l.is_empty())
            .collect()
    };
    lines
        .iter()
        .map(|l| l.parse::<Binomial>().map_err(|e: IdealError| bad(e.to_string())))
        .collect()
}

fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

#[derive(Serialize)]
struct LaplacianReport {
    n: usize,
    /// Weight of edge `{i,j}` of the weighted complete graph, keyed `"i,j"`.
    weights: BTreeMap<String, String>,
    laplacian: Vec<Vec<String>>,
    map: cztree_core::coords::CoordinateMapDocument,
}

#[derive(Serialize)]
struct KernelEntry {
    binomial: String,
    in_kernel: bool,
}

#[derive(Serialize)]
struct KernelOutput {
    parametrization: BTreeMap<String, String>,
    checked: usize,
    in_kernel: usize,
    results: Vec<KernelEntry>,
    passed: bool,
}

/// Runs a command and returns its artifact without writing it anywhere.
pub fn execute(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Analyze { tree } => Ok(Outcome::pass(json(&classify(&load_tree(tree)?))?)),
        Command::Generators { tree, format } => {
            let a = analyze(&load_tree(tree)?)?;
            let body = match format {
                ExportFormat::Text => a.generators.to_text(),
                ExportFormat::Json => json(&a.generators.to_json())?,
                ExportFormat::M2Script => a.generators.to_m2(),
            };
            Ok(Outcome::pass(body))
        }
        Command::Verify { tree, trials, seed } => {
            let r = run_verification(&load_tree(tree)?, *trials as usize, *seed)?;
            Ok(Outcome::checked(json(&r)?, r.passed))
        }
        Command::Laplacian { tree, graph } => {
            let g = match (tree, graph) {
                (Some(t), _) => derive_graph(&load_tree(t)?),
                (None, Some(g)) => load_graph(g)?,
                (None, None) => unreachable!("clap requires one of --tree and --graph"),
            };
            let gamma = gamma_graph(&g);
            let map = g_derived_laplacian_map(&g).map_err(|e| CliError::Verify(e.into()))?;
            let report = LaplacianReport {
                n: g.n(),
                weights: gamma
                    .weights
                    .iter()
                    .map(|((i, j), w)| (format!("{i},{j}"), w.to_string()))
                    .collect(),
                laplacian: gamma
                    .laplacian
                    .iter()
                    .map(|r| r.iter().map(ToString::to_string).collect())
                    .collect(),
                map: map.to_document(),
            };
            Ok(Outcome::pass(json(&report)?))
        }
        Command::Kernel { tree, generators } => {
            let a = analyze(&load_tree(tree)?)?;
            let bs = load_binomials(generators)?;
            let mut results = Vec::with_capacity(bs.len());
            for b in &bs {
                let ok = in_kernel(&a.monomial, b).map_err(|e| CliError::Generators {
                    path: generators.clone(),
                    message: e.to_string(),
                })?;
                results.push(KernelEntry {
                    binomial: b.to_string(),
                    in_kernel: ok,
                });
            }
            let parametrization = a
                .monomial
                .coordinates
                .iter()
                .map(|v| Ok((v.to_string(), a.monomial.describe(v).map_err(VerifyError::from)?)))
                .collect::<Result<_, CliError>>()?;
            let hits = results.iter().filter(|r| r.in_kernel).count();
            let out = KernelOutput {
                parametrization,
                checked: results.len(),
                in_kernel: hits,
                passed: hits == results.len(),
                results,
            };
            Ok(Outcome::checked(json(&out)?, out.passed))
        }
    }
}

/// Executes the configured command, writes its artifact and returns the exit
/// code. Errors go to stderr.
pub fn run(config: &CliConfig) -> u8 {
    let outcome = match execute(&config.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let written = match &config.output {
        Some(path) => fs::write(path, &outcome.body).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => std::io::stdout()
            .write_all(outcome.body.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    };
    match written {
        Ok(()) => outcome.code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
