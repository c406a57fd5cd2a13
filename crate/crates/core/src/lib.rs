//! Fault-tolerant BFS structures with a backup/reinforcement split.
//!
//! Given an undirected graph `G`, a source `s` and a tradeoff knob
//! `epsilon`, the toolkit builds a subgraph `H` together with a small set of
//! *reinforced* edges `E'` so that after the failure of any single
//! non-reinforced edge, distances from `s` inside the surviving `H` equal
//! the distances in the surviving `G`. Everything is exact and deterministic:
//! shortest paths are canonicalized by a lexicographic tie-break weight, and
//! every produced structure can be checked against a brute-force oracle.

pub mod construction;
pub mod corpus;
pub mod decomposition;
pub mod graph;
pub mod interference;
pub mod lowerbound;
pub mod numeric;
pub mod path;
pub mod replacement;
pub mod search;
pub mod tree;
pub mod verify;

pub use construction::{
    baseline_ftbfs, baseline_structure, build_structure, build_structure_with, k_eps,
    last_unprotected_edges, phase_s1, phase_s2, split_uncovered, BuildError, BuildOptions,
    BuildStats, FtBfsStructure, StructureFile,
};
pub use graph::{Graph, GraphError, ParseError, View};
pub use interference::{
    branch_intersects, classify, interferes, no_unrelated_interference, unrelated_interferers,
    Classification, InterferenceGraph, PairSet,
};
pub use lowerbound::{
    gen_multi_source, gen_single_source, min_feasible_n_multi, min_feasible_n_single, LbAudit,
    LbError, LowerBoundInstance,
};
pub use path::Path;
pub use replacement::{
    all_replacement_paths, order_deepest_first, replacement_or_tree_path, replacement_path,
    PairKey, ReplacementPath, UncoveredPairs,
};
pub use search::{shortest_path, Perturbation, TieBreakWeight};
pub use tree::{build_bfs_tree, BfsTree};
pub use verify::{
    enumerate_all_shortest, unprotected_by_distance, verify_structure, verify_structure_with,
    VerificationReport, VerifyOptions, Violation,
};
