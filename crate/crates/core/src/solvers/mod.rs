//! Exact minimum-cardinality solvers.

mod bnb;
mod brute;
pub mod milp;

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::graph::VertexSet;

pub use bnb::{
    bnb_min_rcds, bnb_min_rcds_with, min_connected_dominating_set, min_dominating_set, BnbOptions,
};
pub use brute::{brute_force_min_rcds, BRUTE_FORCE_LIMIT};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Brute,
    Bnb,
    Dp,
    DominatingSet,
    ConnectedDominatingSet,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Brute => "brute",
            Method::Bnb => "bnb",
            Method::Dp => "dp",
            Method::DominatingSet => "dominating_set",
            Method::ConnectedDominatingSet => "connected_dominating_set",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveStats {
    /// Search nodes explored, subsets enumerated, or table entries built.
    pub nodes: u64,
    pub seconds: f64,
    /// False when a node budget cut the search short.
    pub optimal: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub removed_edges: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub set: VertexSet,
    pub cardinality: usize,
    pub method: Method,
    pub stats: SolveStats,
}

impl SolveResult {
    pub(crate) fn new(set: VertexSet, method: Method, stats: SolveStats) -> Self {
        SolveResult {
            cardinality: set.len(),
            set,
            method,
            stats,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("result serializes")
    }
}

pub(crate) struct Timer(Instant);

impl Timer {
    pub(crate) fn start() -> Self {
        Timer(Instant::now())
    }

    pub(crate) fn seconds(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}
