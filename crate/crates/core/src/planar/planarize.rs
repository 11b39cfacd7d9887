use std::collections::VecDeque;

use crate::error::Result;
use crate::graph::{EdgeSet, Graph};

use super::{dmp, PlaneEmbedding};

#[derive(Clone, Debug)]
pub struct PlanarizationResult {
    pub planar_graph: Graph,
    pub removed_edges: EdgeSet,
    pub embedding: PlaneEmbedding,
}

/// Greedy edge-deletion planarization.
///
/// Edges of a BFS tree from the smallest vertex are kept first, so the
/// result stays connected; the remaining edges are then offered in sorted
/// order and kept whenever the graph stays planar.
pub fn planarize(g: &Graph) -> Result<PlanarizationResult> {
    g.require_connected()?;
    if let Some(rot) = dmp::planar_rotation(g) {
        return Ok(PlanarizationResult {
            planar_graph: g.clone(),
            removed_edges: EdgeSet::new(),
            embedding: PlaneEmbedding::from_dense_rotation(g.clone(), rot)?,
        });
    }
    let mut keep = vec![false; g.m()];
    let mut seen = vec![false; g.n()];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(v) = queue.pop_front() {
        for (&u, &e) in g.adj(v).iter().zip(g.incident(v)) {
            if !seen[u] {
                seen[u] = true;
                keep[e] = true;
                queue.push_back(u);
            }
        }
    }
    let mut removed = EdgeSet::new();
    for e in 0..g.m() {
        if keep[e] {
            continue;
        }
        keep[e] = true;
        let trial = g.with_edge_subset(|x| keep[x]);
        if dmp::planar_rotation(&trial).is_none() {
            keep[e] = false;
            let (u, v) = g.edge_ids(e);
            removed.insert(u, v);
        }
    }
    let planar_graph = g.with_edge_subset(|x| keep[x]);
    let rot = dmp::planar_rotation(&planar_graph).expect("kept edges form a planar graph");
    let embedding = PlaneEmbedding::from_dense_rotation(planar_graph.clone(), rot)?;
    Ok(PlanarizationResult {
        planar_graph,
        removed_edges: removed,
        embedding,
    })
}
