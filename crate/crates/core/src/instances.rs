//! Bundled IEEE test-system topologies and their reference values.

use crate::error::{Error, Result};
use crate::graph::{parse_edge_list, Graph};

/// Reference row for one bundled instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Reference {
    pub name: &'static str,
    pub vertices: usize,
    pub edges: usize,
    pub planar: bool,
    /// Branchwidth of the (planarized) graph reported by an optimal tool.
    pub branchwidth: usize,
    /// Minimum RCDS of the planarized graph.
    pub rcds_planarized: usize,
    /// Minimum RCDS of the original graph.
    pub rcds: usize,
    /// Minimum dominating set.
    pub dominating: usize,
}

const fn r(
    name: &'static str,
    vertices: usize,
    edges: usize,
    planar: bool,
    branchwidth: usize,
    rcds_planarized: usize,
    rcds: usize,
    dominating: usize,
) -> Reference {
    Reference {
        name,
        vertices,
        edges,
        planar,
        branchwidth,
        rcds_planarized,
        rcds,
        dominating,
    }
}

pub const REFERENCES: [Reference; 8] = [
    r("ieee9", 9, 9, true, 2, 3, 3, 3),
    r("ieee14", 14, 20, true, 2, 4, 4, 4),
    r("ieee24", 24, 34, false, 3, 8, 8, 7),
    r("ieee30", 30, 41, true, 3, 10, 10, 10),
    r("ieee39", 39, 46, true, 3, 15, 15, 13),
    r("ieee57", 57, 78, false, 4, 20, 19, 17),
    r("ieee118", 118, 179, true, 4, 34, 34, 32),
    r("ieee300", 300, 409, false, 4, 97, 93, 87),
];

const SOURCES: [(&str, &str); 8] = [
    ("ieee9", include_str!("../data/ieee9.txt")),
    ("ieee14", include_str!("../data/ieee14.txt")),
    ("ieee24", include_str!("../data/ieee24.txt")),
    ("ieee30", include_str!("../data/ieee30.txt")),
    ("ieee39", include_str!("../data/ieee39.txt")),
    ("ieee57", include_str!("../data/ieee57.txt")),
    ("ieee118", include_str!("../data/ieee118.txt")),
    ("ieee300", include_str!("../data/ieee300.txt")),
];

/// Names of the bundled instances, smallest first.
pub fn names() -> Vec<&'static str> {
    SOURCES.iter().map(|(n, _)| *n).collect()
}

pub fn reference(name: &str) -> Option<&'static Reference> {
    REFERENCES.iter().find(|r| r.name == name)
}

/// Edge-list text of a bundled instance.
pub fn source(name: &str) -> Option<&'static str> {
    SOURCES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn load(name: &str) -> Result<Graph> {
    let text = source(name).ok_or_else(|| {
        Error::Domain(format!(
            "unknown instance {name:?}; bundled: {}",
            names().join(", ")
        ))
    })?;
    parse_edge_list(text)
}
