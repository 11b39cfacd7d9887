//! Greedy bottom-up construction of sphere-cut decompositions.
//!
//! Every edge starts as its own cluster. Two clusters sharing a middle-set
//! vertex may merge when their union still has a noose; the merge with the
//! smallest resulting middle set goes first. Once three clusters remain they
//! hang off one final internal node. Widths are not optimal.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::planar::PlaneEmbedding;

use super::noose::find_noose;
use super::{DecompositionTree, ScDecomposition};

/// Tie-breaking policy among merges with equally small middle sets.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Prefer merging small clusters, growing many regions in parallel.
    #[default]
    Balanced,
    /// Prefer merging into the largest cluster, growing one region.
    Grow,
    /// Like `Balanced` but breaks ties towards high edge ids.
    Reversed,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Balanced, Strategy::Grow, Strategy::Reversed];
}

struct Cluster {
    in_f: Vec<bool>,
    edges: Vec<usize>,
    omega: Vec<usize>,
    node: u32,
    alive: bool,
}

type Key = (usize, usize, usize, usize);

struct Builder<'a> {
    emb: &'a PlaneEmbedding,
    strategy: Strategy,
    clusters: Vec<Cluster>,
    by_vertex: Vec<Vec<usize>>,
    queue: BTreeSet<(Key, usize, usize)>,
    tried: BTreeSet<(usize, usize)>,
    tree_edges: Vec<(u32, u32)>,
    next_node: u32,
}

impl<'a> Builder<'a> {
    fn key(&self, a: usize, b: usize, width: usize) -> Key {
        let size = self.clusters[a].edges.len() + self.clusters[b].edges.len();
        let (lo, hi) = (a.min(b), a.max(b));
        match self.strategy {
            Strategy::Balanced => (width, size, lo, hi),
            Strategy::Grow => (width, usize::MAX - size, lo, hi),
            Strategy::Reversed => (width, size, usize::MAX - hi, usize::MAX - lo),
        }
    }

    fn union(&self, a: usize, b: usize) -> (Vec<bool>, Vec<usize>) {
        let (ca, cb) = (&self.clusters[a], &self.clusters[b]);
        let in_f: Vec<bool> = ca
            .in_f
            .iter()
            .zip(&cb.in_f)
            .map(|(x, y)| *x || *y)
            .collect();
        let mut edges: Vec<usize> = ca.edges.iter().chain(&cb.edges).copied().collect();
        edges.sort_unstable();
        (in_f, edges)
    }

    fn consider(&mut self, a: usize, b: usize) {
        let pair = (a.min(b), a.max(b));
        if a == b || !self.tried.insert(pair) {
            return;
        }
        let (in_f, edges) = self.union(a, b);
        if let Some(noose) = find_noose(self.emb, &in_f, &edges, None) {
            let key = self.key(a, b, noose.omega.len());
            self.queue.insert((key, pair.0, pair.1));
        }
    }

    fn add_cluster(
        &mut self,
        in_f: Vec<bool>,
        edges: Vec<usize>,
        omega: Vec<usize>,
        node: u32,
    ) -> usize {
        let id = self.clusters.len();
        for &v in &omega {
            self.by_vertex[v].push(id);
        }
        self.clusters.push(Cluster {
            in_f,
            edges,
            omega,
            node,
            alive: true,
        });
        id
    }

    fn neighbours(&self, c: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.clusters[c]
            .omega
            .iter()
            .flat_map(|&v| self.by_vertex[v].iter().copied())
            .filter(|&o| o != c && self.clusters[o].alive)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn alive(&self) -> Vec<usize> {
        (0..self.clusters.len())
            .filter(|&c| self.clusters[c].alive)
            .collect()
    }

    fn pop_merge(&mut self) -> Option<(usize, usize)> {
        while let Some(entry) = self.queue.pop_first() {
            let (_, a, b) = entry;
            if self.clusters[a].alive && self.clusters[b].alive {
                return Some((a, b));
            }
        }
        None
    }
}

/// Builds a sphere-cut decomposition with the default strategy.
pub fn heuristic_sphere_cut(emb: &PlaneEmbedding) -> Result<ScDecomposition> {
    heuristic_sphere_cut_with(emb, Strategy::default())
}

/// Runs every strategy and keeps the narrowest decomposition (first on ties).
pub fn best_heuristic_sphere_cut(emb: &PlaneEmbedding) -> Result<ScDecomposition> {
    let mut best: Option<ScDecomposition> = None;
    let mut last_err = None;
    for s in Strategy::ALL {
        match heuristic_sphere_cut_with(emb, s) {
            Ok(d) => {
                if best.as_ref().map_or(true, |b| d.width() < b.width()) {
                    best = Some(d);
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    best.ok_or_else(|| last_err.expect("at least one strategy ran"))
}

pub fn heuristic_sphere_cut_with(
    emb: &PlaneEmbedding,
    strategy: Strategy,
) -> Result<ScDecomposition> {
    let g = emb.graph();
    let m = g.m();
    if m < 3 {
        return Err(Error::Domain(format!(
            "heuristic decomposition needs at least 3 edges, got {m}"
        )));
    }
    let mut b = Builder {
        emb,
        strategy,
        clusters: Vec::with_capacity(2 * m),
        by_vertex: vec![Vec::new(); g.n()],
        queue: BTreeSet::new(),
        tried: BTreeSet::new(),
        tree_edges: Vec::with_capacity(2 * m),
        next_node: m as u32,
    };
    let mut leaves = Vec::with_capacity(m);
    for e in 0..m {
        let mut in_f = vec![false; m];
        in_f[e] = true;
        let noose = find_noose(emb, &in_f, &[e], None)
            .ok_or_else(|| Error::Internal(format!("edge {:?} has no noose", g.edge_ids(e))))?;
        leaves.push((e as u32, g.edge_ids(e)));
        b.add_cluster(in_f, vec![e], noose.omega, e as u32);
    }
    for c in 0..m {
        for o in b.neighbours(c) {
            b.consider(c, o);
        }
    }

    let mut remaining = m;
    while remaining > 3 {
        let (x, y) = match b.pop_merge() {
            Some(pair) => pair,
            None => {
                // Nothing shares a boundary vertex and merges cleanly; try
                // every remaining pair once before giving up.
                let alive = b.alive();
                for (i, &p) in alive.iter().enumerate() {
                    for &q in &alive[i + 1..] {
                        b.consider(p, q);
                    }
                }
                b.pop_merge().ok_or_else(|| {
                    Error::Decomposition(format!("heuristic stuck with {remaining} clusters"))
                })?
            }
        };
        let (in_f, edges) = b.union(x, y);
        let noose = find_noose(emb, &in_f, &edges, None).expect("merge was validated");
        let node = b.next_node;
        b.next_node += 1;
        b.tree_edges.push((b.clusters[x].node, node));
        b.tree_edges.push((b.clusters[y].node, node));
        b.clusters[x].alive = false;
        b.clusters[y].alive = false;
        let c = b.add_cluster(in_f, edges, noose.omega, node);
        remaining -= 1;
        for o in b.neighbours(c) {
            b.consider(c, o);
        }
    }
    let last = b.next_node;
    for c in b.alive() {
        b.tree_edges.push((b.clusters[c].node, last));
    }
    let tree = DecompositionTree::from_parts(&b.tree_edges, &leaves, BTreeMap::new());
    ScDecomposition::from_tree(emb, &tree)
}
