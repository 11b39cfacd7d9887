//! Exact solvers for perfect protection placement in power networks.
//!
//! A set of protected buses `D` is perfect when the lines incident to `D`
//! connect every bus; equivalently `D` is a relaxed connected dominating set
//! (RCDS). This crate provides graph primitives, verification and attack
//! synthesis, brute-force and branch-and-bound solvers, a MILP exporter, a
//! planarity test with embedding, sphere-cut decompositions and a dynamic
//! program over them.

pub mod bench;
pub mod dp;
pub mod error;
pub mod graph;
pub mod instances;
pub mod planar;
pub mod protection;
pub mod scd;
pub mod solvers;

pub use bench::{bench_suite, render_table, BenchOptions, BenchRecord};
pub use dp::{
    consistent_basic, dp_recursion, leaf_table, merge_compatible, solve_decomposition,
    solve_planar_rcds, traceback, BasicColor, Color, Coloring, DpTables, Mark, Merged, ValueTable,
};
pub use error::{Error, Result};
pub use graph::{
    connected_components, incident_edges, parse_edge_list, EdgeSet, Graph, VertexId, VertexSet,
};
pub use planar::{is_planar, planarity_embed, planarize, PlanarizationResult, PlaneEmbedding};
pub use protection::{
    construct_stealth_attack, is_perfect_protection, is_rcds, verify_attack,
    verify_attack_with_constants, Attack, LineConstants,
};
pub use scd::{
    best_heuristic_sphere_cut, heuristic_sphere_cut, heuristic_sphere_cut_with,
    import_decomposition, import_decomposition_str, merge_context, root_decomposition, validate,
    DecompositionTree, MergeContext, RootedScd, ScDecomposition, Strategy, ValidationReport,
};
pub use solvers::milp::{build_milp, export_lp, MilpAssignment, MilpModel};
pub use solvers::{
    bnb_min_rcds, bnb_min_rcds_with, brute_force_min_rcds, min_connected_dominating_set,
    min_dominating_set, BnbOptions, Method, SolveResult, SolveStats,
};
