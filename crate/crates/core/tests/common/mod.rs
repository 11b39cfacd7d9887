//! Graph generators shared by the integration tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rcds_core::{is_planar, Graph, VertexId};

/// Every connected labeled graph on vertices `1..=n`.
pub fn all_connected_graphs(n: u32) -> Vec<Graph> {
    if n == 1 {
        return vec![Graph::new([1], std::iter::empty()).unwrap()];
    }
    let pairs: Vec<(VertexId, VertexId)> = (1..=n)
        .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        if (mask.count_ones() as u32) < n - 1 {
            continue;
        }
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask & (1 << k) != 0)
            .map(|(_, &p)| p);
        let g = Graph::new(1..=n, edges).unwrap();
        if g.is_connected() {
            out.push(g);
        }
    }
    out
}

/// Random spanning tree on `1..=n` plus each other pair with probability `p`.
pub fn random_connected<R: Rng>(rng: &mut R, n: u32, p: f64) -> Graph {
    let mut edges = tree_edges(rng, n);
    for i in 1..=n {
        for j in i + 1..=n {
            if rng.gen_bool(p) {
                edges.push((i, j));
            }
        }
    }
    Graph::new(1..=n, edges).unwrap()
}

/// Random spanning tree grown by adding random non-tree pairs that keep the
/// graph planar, stopping after `extra` attempts.
pub fn random_connected_planar<R: Rng>(rng: &mut R, n: u32, extra: usize) -> Graph {
    let mut edges = tree_edges(rng, n);
    let mut pairs: Vec<(VertexId, VertexId)> = (1..=n)
        .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
        .collect();
    pairs.shuffle(rng);
    for &p in pairs.iter().take(extra) {
        if edges.iter().any(|&(a, b)| (a, b) == p || (b, a) == p) {
            continue;
        }
        edges.push(p);
        let g = Graph::new(1..=n, edges.iter().copied()).unwrap();
        if !is_planar(&g).unwrap() {
            edges.pop();
        }
    }
    Graph::new(1..=n, edges).unwrap()
}

fn tree_edges<R: Rng>(rng: &mut R, n: u32) -> Vec<(VertexId, VertexId)> {
    let mut order: Vec<VertexId> = (1..=n).collect();
    order.shuffle(rng);
    (1..order.len())
        .map(|i| (order[rng.gen_range(0..i)], order[i]))
        .collect()
}
