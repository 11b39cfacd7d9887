//! Rooting a decomposition for dynamic programming.
//!
//! A node `z` is inserted into one tree edge `{u, v}` and a root `r` is hung
//! off `z`. Every edge of the rooted tree is named by its lower endpoint, so
//! edge `x` joins `x` to its parent. The middle set of `{z, r}` is empty and
//! both halves of the split edge keep its middle set.

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId, VertexSet};

use super::ScDecomposition;

#[derive(Clone, Debug)]
pub struct RootedScd {
    graph: Graph,
    parent: Vec<usize>,
    children: Vec<Vec<usize>>,
    leaf: Vec<Option<usize>>,
    omega: Vec<Vec<usize>>,
    order: Vec<Vec<usize>>,
    z: usize,
    r: usize,
    post_order: Vec<usize>,
}

/// Roots `d` by subdividing `attach` (default: its first tree edge).
pub fn root_decomposition(d: &ScDecomposition, attach: Option<(u32, u32)>) -> Result<RootedScd> {
    let k = match attach {
        None => 0,
        Some((a, b)) => d.edge_index(a, b)?,
    };
    let count = d.node_ids.len();
    let (u, v) = d.edges[k];
    let (z, r) = (count, count + 1);
    let mut parent = vec![usize::MAX; count + 2];
    let mut children = vec![Vec::new(); count + 2];
    let mut omega = vec![Vec::new(); count + 2];
    let mut order = vec![Vec::new(); count + 2];
    let mut leaf = d.leaf.clone();
    leaf.extend([None, None]);

    let edge_data = |a: usize, b: usize| {
        let key = if d.node_ids[a] < d.node_ids[b] {
            (a, b)
        } else {
            (b, a)
        };
        let i = d.edges.iter().position(|&e| e == key).expect("tree edge");
        (d.omega[i].clone(), d.order[i].clone())
    };

    parent[z] = r;
    children[r].push(z);
    let mut stack = Vec::new();
    for x in [u, v] {
        parent[x] = z;
        children[z].push(x);
        omega[x] = d.omega[k].clone();
        order[x] = d.order[k].clone();
        stack.push(x);
    }
    while let Some(x) = stack.pop() {
        for &y in &d.adj[x] {
            if y == parent[x] || (x == u && y == v) || (x == v && y == u) {
                continue;
            }
            parent[y] = x;
            children[x].push(y);
            let (om, ord) = edge_data(x, y);
            omega[y] = om;
            order[y] = ord;
            stack.push(y);
        }
    }
    for c in children.iter_mut() {
        c.sort_unstable();
    }

    let mut post_order = Vec::with_capacity(count + 1);
    let mut stack = vec![(z, false)];
    while let Some((x, expanded)) = stack.pop() {
        if expanded {
            post_order.push(x);
            continue;
        }
        stack.push((x, true));
        for &c in children[x].iter().rev() {
            stack.push((c, false));
        }
    }
    Ok(RootedScd {
        graph: d.graph.clone(),
        parent,
        children,
        leaf,
        omega,
        order,
        z,
        r,
        post_order,
    })
}

impl RootedScd {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// The edge `{z, r}`.
    pub fn root_edge(&self) -> usize {
        self.z
    }

    /// The root node `r` (not an edge).
    pub fn root_node(&self) -> usize {
        self.r
    }

    /// Number of tree edges, two more than the unrooted tree.
    pub fn edge_count(&self) -> usize {
        self.parent.len() - 1
    }

    /// Edges in bottom-up order, ending with the root edge.
    pub fn post_order(&self) -> &[usize] {
        &self.post_order
    }

    pub fn children(&self, e: usize) -> &[usize] {
        &self.children[e]
    }

    pub fn parent(&self, e: usize) -> usize {
        self.parent[e]
    }

    pub fn is_leaf(&self, e: usize) -> bool {
        self.leaf[e].is_some()
    }

    pub fn leaf_edge(&self, e: usize) -> Option<(VertexId, VertexId)> {
        self.leaf[e].map(|x| self.graph.edge_ids(x))
    }

    pub fn middle_set(&self, e: usize) -> VertexSet {
        self.omega[e].iter().map(|&v| self.graph.id(v)).collect()
    }

    pub fn cyclic_order(&self, e: usize) -> Vec<VertexId> {
        self.order[e].iter().map(|&v| self.graph.id(v)).collect()
    }

    pub fn width(&self) -> usize {
        self.omega.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Graph edges below `e` (the subgraph `G_e`), as dense edge indices.
    #[cfg(test)]
    pub(crate) fn subgraph_edges(&self, e: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![e];
        while let Some(x) = stack.pop() {
            if let Some(g) = self.leaf[x] {
                out.push(g);
            }
            stack.extend(self.children[x].iter().copied());
        }
        out.sort_unstable();
        out
    }

    pub(crate) fn leaf_dense(&self, e: usize) -> Option<usize> {
        self.leaf[e]
    }

    pub(crate) fn order_dense(&self, e: usize) -> &[usize] {
        &self.order[e]
    }
}

/// Vertex classes for merging the tables of `e`'s two children.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergeContext {
    /// In `ω(e)` and `ω(e1)` only.
    pub x1: VertexSet,
    /// In `ω(e)` and `ω(e2)` only.
    pub x2: VertexSet,
    /// In all three middle sets.
    pub x3: VertexSet,
    /// In both children's middle sets but not in `ω(e)`.
    pub x4: VertexSet,
}

impl MergeContext {
    pub fn new(e: &VertexSet, e1: &VertexSet, e2: &VertexSet) -> Self {
        MergeContext {
            x1: e.difference(e2),
            x2: e.difference(e1),
            x3: e.intersection(e1).intersection(e2),
            x4: e1.union(e2).difference(e),
        }
    }
}

pub fn merge_context(r: &RootedScd, e: usize) -> Result<MergeContext> {
    if e >= r.edge_count() {
        return Err(Error::Decomposition(format!("no rooted edge {e}")));
    }
    let ch = r.children(e);
    if ch.len() != 2 {
        return Err(Error::Domain(format!("rooted edge {e} has no children")));
    }
    Ok(MergeContext::new(
        &r.middle_set(e),
        &r.middle_set(ch[0]),
        &r.middle_set(ch[1]),
    ))
}
