//! Mixed-integer model of perfect protection placement.
//!
//! Binary `x_i` marks a protected bus. A single commodity is shipped from a
//! source `s` to every other bus along edges; an edge may carry flow only if
//! one of its endpoints is protected:
//!
//! ```text
//! min  Σ_i x_i
//! s.t. Σ_j y_ij − Σ_j y_ji = −1            for every i ≠ s
//!      y_ij + y_ji ≤ (|V|−1)(x_i + x_j)    for every edge {i,j}
//!      x_i ∈ {0,1},  y_ij, y_ji ≥ 0
//! ```
//!
//! The model is exported in LP format for external solvers; it is not solved
//! here.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId, VertexSet};

#[derive(Clone, Debug, PartialEq)]
pub struct MilpModel {
    pub vertices: Vec<VertexId>,
    pub source: VertexId,
    /// Undirected edges `(i, j)` with `i < j`; each contributes `y_i_j` and `y_j_i`.
    pub edges: Vec<(VertexId, VertexId)>,
    /// Capacity multiplier `|V| − 1`.
    pub capacity: u64,
    neighbors: BTreeMap<VertexId, Vec<VertexId>>,
}

/// Conservation row for vertex `i`: `Σ y_i_j − Σ y_j_i = −1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConservationRow {
    pub vertex: VertexId,
    pub outgoing: Vec<(VertexId, VertexId)>,
    pub incoming: Vec<(VertexId, VertexId)>,
}

/// A candidate assignment for [`MilpModel`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MilpAssignment {
    pub x: BTreeMap<VertexId, u8>,
    pub y: BTreeMap<(VertexId, VertexId), f64>,
}

impl MilpAssignment {
    pub fn objective(&self) -> u64 {
        self.x.values().map(|&b| u64::from(b)).sum()
    }
}

const TOL: f64 = 1e-9;

pub fn build_milp(g: &Graph, source: Option<VertexId>) -> Result<MilpModel> {
    g.require_connected()?;
    let source = match source {
        Some(s) => {
            g.require(s)?;
            s
        }
        None => g.id(0),
    };
    let neighbors = g
        .vertices()
        .iter()
        .map(|&v| (v, g.neighbors(v).expect("own vertex").collect()))
        .collect();
    Ok(MilpModel {
        vertices: g.vertices().to_vec(),
        source,
        edges: g.edge_list(),
        capacity: (g.n() as u64).saturating_sub(1),
        neighbors,
    })
}

impl MilpModel {
    pub fn num_binaries(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_flows(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn conservation_rows(&self) -> Vec<ConservationRow> {
        self.vertices
            .iter()
            .filter(|&&i| i != self.source)
            .map(|&i| {
                let nb = &self.neighbors[&i];
                ConservationRow {
                    vertex: i,
                    outgoing: nb.iter().map(|&j| (i, j)).collect(),
                    incoming: nb.iter().map(|&j| (j, i)).collect(),
                }
            })
            .collect()
    }

    pub fn num_capacity_rows(&self) -> usize {
        self.edges.len()
    }

    /// Returns the first violated constraint, if any.
    pub fn check(&self, a: &MilpAssignment) -> std::result::Result<(), String> {
        for &v in &self.vertices {
            match a.x.get(&v) {
                Some(0 | 1) => {}
                Some(b) => return Err(format!("x_{v} = {b} is not binary")),
                None => return Err(format!("x_{v} missing")),
            }
        }
        let y = |i: VertexId, j: VertexId| a.y.get(&(i, j)).copied();
        for &(i, j) in &self.edges {
            for (p, q) in [(i, j), (j, i)] {
                match y(p, q) {
                    Some(f) if f >= -TOL => {}
                    Some(f) => return Err(format!("y_{p}_{q} = {f} is negative")),
                    None => return Err(format!("y_{p}_{q} missing")),
                }
            }
        }
        for row in self.conservation_rows() {
            let out: f64 = row.outgoing.iter().map(|&(p, q)| a.y[&(p, q)]).sum();
            let inc: f64 = row.incoming.iter().map(|&(p, q)| a.y[&(p, q)]).sum();
            if (out - inc + 1.0).abs() > TOL {
                return Err(format!(
                    "conservation at {} gives {}",
                    row.vertex,
                    out - inc
                ));
            }
        }
        for &(i, j) in &self.edges {
            let lhs = a.y[&(i, j)] + a.y[&(j, i)];
            let rhs = self.capacity as f64 * f64::from(a.x[&i] + a.x[&j]);
            if lhs > rhs + TOL {
                return Err(format!("capacity on {{{i},{j}}}: {lhs} > {rhs}"));
            }
        }
        Ok(())
    }

    /// Builds a feasible assignment from a perfect protection set `d`:
    /// `x` is its indicator and one unit per bus is shipped from the source
    /// along a BFS tree of `(V, I_D(E))`.
    pub fn witness(&self, g: &Graph, d: &VertexSet) -> Result<MilpAssignment> {
        let mask = g.mask_of(d)?;
        let n = g.n();
        let s = g.require(self.source)?;
        let mut parent = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &u in g.adj(v) {
                if !seen[u] && (mask[u] || mask[v]) {
                    seen[u] = true;
                    parent[u] = v;
                    queue.push_back(u);
                }
            }
        }
        if order.len() != n {
            return Err(Error::Domain(format!(
                "{d} is not a perfect protection set"
            )));
        }
        let mut subtree = vec![1u64; n];
        for &v in order.iter().rev() {
            if parent[v] != usize::MAX {
                subtree[parent[v]] += subtree[v];
            }
        }
        let mut a = MilpAssignment::default();
        for v in 0..n {
            a.x.insert(g.id(v), u8::from(mask[v]));
        }
        for &(i, j) in &self.edges {
            a.y.insert((i, j), 0.0);
            a.y.insert((j, i), 0.0);
        }
        for v in 0..n {
            if parent[v] != usize::MAX {
                a.y.insert((g.id(parent[v]), g.id(v)), subtree[v] as f64);
            }
        }
        Ok(a)
    }
}

/// LP-format text of the model.
pub fn export_lp(m: &MilpModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "\\ perfect protection placement, source {}", m.source);
    out.push_str("Minimize\n obj:");
    for (k, v) in m.vertices.iter().enumerate() {
        let _ = write!(out, "{} x_{v}", if k == 0 { "" } else { " +" });
    }
    out.push_str("\nSubject To\n");
    for row in m.conservation_rows() {
        let _ = write!(out, " flow_{}:", row.vertex);
        for (k, (p, q)) in row.outgoing.iter().enumerate() {
            let _ = write!(out, "{} y_{p}_{q}", if k == 0 { "" } else { " +" });
        }
        for (p, q) in &row.incoming {
            let _ = write!(out, " - y_{p}_{q}");
        }
        out.push_str(" = -1\n");
    }
    for &(i, j) in &m.edges {
        let c = m.capacity;
        let _ = writeln!(
            out,
            " cap_{i}_{j}: y_{i}_{j} + y_{j}_{i} - {c} x_{i} - {c} x_{j} <= 0"
        );
    }
    out.push_str("Bounds\n");
    for &(i, j) in &m.edges {
        let _ = writeln!(out, " y_{i}_{j} >= 0");
        let _ = writeln!(out, " y_{j}_{i} >= 0");
    }
    out.push_str("Binary\n");
    for v in &m.vertices {
        let _ = writeln!(out, " x_{v}");
    }
    out.push_str("End\n");
    out
}
