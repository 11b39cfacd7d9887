//! Sphere-cut decompositions of plane graphs.
//!
//! A branch decomposition is an unrooted tree with internal nodes of degree
//! three whose leaves are in bijection with the graph's edges. Removing a
//! tree edge splits the leaves into `E1` and `E2`; the middle set `ω` is the
//! set of vertices incident to both sides. In a sphere-cut decomposition
//! every such split is realized by a noose through exactly `ω`, which fixes
//! a cyclic order `π` of `ω`.
//!
//! [`DecompositionTree`] is the raw, serializable description.
//! [`ScDecomposition`] is a validated one with middle sets and cyclic orders.

mod heuristic;
pub(crate) mod noose;
mod rooted;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeSet, Graph, VertexId, VertexSet};
use crate::planar::PlaneEmbedding;

pub use heuristic::{
    best_heuristic_sphere_cut, heuristic_sphere_cut, heuristic_sphere_cut_with, Strategy,
};
pub use rooted::{merge_context, root_decomposition, MergeContext, RootedScd};

/// Node of a raw decomposition tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeNode {
    pub id: u32,
    pub neighbors: Vec<u32>,
    pub leaf_edge: Option<(VertexId, VertexId)>,
}

/// Tree, leaf map and optional cyclic orders keyed by tree edge `(a, b)`
/// with `a < b`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DecompositionTree {
    pub nodes: Vec<TreeNode>,
    pub pi: BTreeMap<(u32, u32), Vec<VertexId>>,
}

#[derive(Serialize, Deserialize)]
struct NodeJson {
    id: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    leaf_edge: Option<[VertexId; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    children: Option<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
struct TreeJson {
    nodes: Vec<NodeJson>,
    #[serde(default)]
    pi: BTreeMap<String, Vec<VertexId>>,
}

fn parse_pair_key(k: &str) -> Result<(u32, u32)> {
    let (a, b) = k
        .split_once('-')
        .and_then(|(a, b)| Some((a.parse().ok()?, b.parse().ok()?)))
        .ok_or_else(|| Error::Decomposition(format!("bad tree edge key {k:?}")))?;
    Ok(crate::graph::ordered(a, b))
}

impl DecompositionTree {
    /// Builds the node list from tree edges and leaf assignments.
    pub fn from_parts(
        tree_edges: &[(u32, u32)],
        leaves: &[(u32, (VertexId, VertexId))],
        pi: BTreeMap<(u32, u32), Vec<VertexId>>,
    ) -> Self {
        let mut nodes: BTreeMap<u32, TreeNode> = BTreeMap::new();
        let node = |id: u32| TreeNode {
            id,
            neighbors: Vec::new(),
            leaf_edge: None,
        };
        for &(a, b) in tree_edges {
            nodes.entry(a).or_insert_with(|| node(a)).neighbors.push(b);
            nodes.entry(b).or_insert_with(|| node(b)).neighbors.push(a);
        }
        for &(k, e) in leaves {
            nodes.entry(k).or_insert_with(|| node(k)).leaf_edge = Some(e);
        }
        DecompositionTree {
            nodes: nodes.into_values().collect(),
            pi,
        }
    }

    pub fn tree_edges(&self) -> Vec<(u32, u32)> {
        let mut out = BTreeSet::new();
        for n in &self.nodes {
            for &m in &n.neighbors {
                out.insert(crate::graph::ordered(n.id, m));
            }
        }
        out.into_iter().collect()
    }

    pub fn to_json(&self) -> String {
        // Internal nodes list all neighbours; a leaf lists a neighbour only
        // when that neighbour is a leaf too (two-edge graphs).
        let nodes = self
            .nodes
            .iter()
            .map(|n| {
                let children = if n.leaf_edge.is_none() {
                    Some(n.neighbors.clone())
                } else {
                    let leaves: Vec<u32> = n
                        .neighbors
                        .iter()
                        .copied()
                        .filter(|&m| self.is_leaf(m))
                        .collect();
                    (!leaves.is_empty()).then_some(leaves)
                };
                NodeJson {
                    id: n.id,
                    leaf_edge: n.leaf_edge.map(|(u, v)| [u, v]),
                    children,
                }
            })
            .collect();
        let pi = self
            .pi
            .iter()
            .map(|(&(a, b), order)| (format!("{a}-{b}"), order.clone()))
            .collect();
        serde_json::to_string(&TreeJson { nodes, pi }).expect("decomposition serializes")
    }

    fn is_leaf(&self, id: u32) -> bool {
        self.nodes
            .iter()
            .any(|n| n.id == id && n.leaf_edge.is_some())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: TreeJson = serde_json::from_str(text)?;
        let mut edges = Vec::new();
        let mut leaves = Vec::new();
        let mut ids = BTreeSet::new();
        for n in &raw.nodes {
            if !ids.insert(n.id) {
                return Err(Error::Decomposition(format!("node {} listed twice", n.id)));
            }
            if let Some([u, v]) = n.leaf_edge {
                leaves.push((n.id, (u, v)));
            }
            for &c in n.children.iter().flatten() {
                edges.push(crate::graph::ordered(n.id, c));
            }
        }
        for &(a, b) in &edges {
            if !ids.contains(&a) || !ids.contains(&b) {
                return Err(Error::Decomposition(format!(
                    "tree edge {a}-{b} names an unknown node"
                )));
            }
        }
        edges.sort_unstable();
        edges.dedup();
        let mut pi = BTreeMap::new();
        for (k, order) in raw.pi {
            pi.insert(parse_pair_key(&k)?, order);
        }
        let mut tree = DecompositionTree::from_parts(&edges, &leaves, pi);
        for &id in &ids {
            if !tree.nodes.iter().any(|n| n.id == id) {
                tree.nodes.push(TreeNode {
                    id,
                    neighbors: Vec::new(),
                    leaf_edge: None,
                });
            }
        }
        tree.nodes.sort_by_key(|n| n.id);
        Ok(tree)
    }

    /// Line format: `leaf k u v`, `edge a b` and `pi a b v1 v2 ...`;
    /// `#` starts a comment.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for n in &self.nodes {
            if let Some((u, v)) = n.leaf_edge {
                let _ = writeln!(out, "leaf {} {u} {v}", n.id);
            }
        }
        for (a, b) in self.tree_edges() {
            let _ = writeln!(out, "edge {a} {b}");
        }
        for (&(a, b), order) in &self.pi {
            let rest: Vec<String> = order.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "pi {a} {b} {}", rest.join(" "));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        let mut leaves = Vec::new();
        let mut pi = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| Error::Parse {
                line: lineno + 1,
                message: msg.to_string(),
            };
            let mut fields = line.split_whitespace();
            let kind = fields.next().unwrap_or("");
            let nums: Vec<u32> = fields
                .map(|f| {
                    f.parse::<u32>()
                        .map_err(|_| err(&format!("{f:?} is not a number")))
                })
                .collect::<Result<_>>()?;
            match (kind, nums.len()) {
                ("leaf", 3) => leaves.push((nums[0], (nums[1], nums[2]))),
                ("edge", 2) => edges.push(crate::graph::ordered(nums[0], nums[1])),
                ("pi", k) if k >= 2 => {
                    pi.insert(crate::graph::ordered(nums[0], nums[1]), nums[2..].to_vec());
                }
                _ => return Err(err(&format!("unrecognized line {line:?}"))),
            }
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(DecompositionTree::from_parts(&edges, &leaves, pi))
    }
}

/// Per-tree-edge outcome of [`validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeCheck {
    pub edge: (u32, u32),
    pub middle_set: Vec<VertexId>,
    /// Cyclic order realized by a noose, if one exists.
    pub pi: Option<Vec<VertexId>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub width: usize,
    pub failures: Vec<String>,
    pub edges: Vec<EdgeCheck>,
}

/// A validated sphere-cut decomposition of a plane graph.
#[derive(Clone, Debug)]
pub struct ScDecomposition {
    graph: Graph,
    node_ids: Vec<u32>,
    adj: Vec<Vec<usize>>,
    leaf: Vec<Option<usize>>,
    /// Tree edges as dense node pairs, ordered by node ids.
    edges: Vec<(usize, usize)>,
    omega: Vec<Vec<usize>>,
    order: Vec<Vec<usize>>,
    width: usize,
}

/// Checks tree shape, the leaf bijection and a noose for every tree edge.
pub fn validate(emb: &PlaneEmbedding, tree: &DecompositionTree) -> ValidationReport {
    analyze(emb, tree).0
}

/// Validates a raw tree against the embedding.
pub fn import_decomposition(
    emb: &PlaneEmbedding,
    tree: &DecompositionTree,
) -> Result<ScDecomposition> {
    ScDecomposition::from_tree(emb, tree)
}

/// Parses JSON (detected by a leading `{`) or the line format, then validates.
pub fn import_decomposition_str(emb: &PlaneEmbedding, text: &str) -> Result<ScDecomposition> {
    let tree = if text.trim_start().starts_with('{') {
        DecompositionTree::from_json(text)?
    } else {
        DecompositionTree::from_text(text)?
    };
    ScDecomposition::from_tree(emb, &tree)
}

fn analyze(
    emb: &PlaneEmbedding,
    tree: &DecompositionTree,
) -> (ValidationReport, Option<ScDecomposition>) {
    let g = emb.graph();
    let mut report = ValidationReport::default();
    let fail = |report: &mut ValidationReport, msg: String| report.failures.push(msg);

    let mut node_ids: Vec<u32> = tree.nodes.iter().map(|n| n.id).collect();
    node_ids.sort_unstable();
    let before = node_ids.len();
    node_ids.dedup();
    if node_ids.len() != before {
        fail(&mut report, "duplicate node ids".into());
        return (report, None);
    }
    let index: BTreeMap<u32, usize> = node_ids
        .iter()
        .enumerate()
        .map(|(i, &id)| (id, i))
        .collect();
    let count = node_ids.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); count];
    let mut leaf: Vec<Option<usize>> = vec![None; count];
    let tree_edges = tree.tree_edges();
    for &(a, b) in &tree_edges {
        match (index.get(&a), index.get(&b)) {
            (Some(&i), Some(&j)) if i != j => {
                adj[i].push(j);
                adj[j].push(i);
            }
            _ => fail(&mut report, format!("tree edge {a}-{b} is invalid")),
        }
    }
    let mut owner: Vec<Option<u32>> = vec![None; g.m()];
    for n in &tree.nodes {
        let Some((u, v)) = n.leaf_edge else { continue };
        match g.edge_between_ids(u, v) {
            None => fail(
                &mut report,
                format!("leaf {} maps to {{{u},{v}}}, not an edge", n.id),
            ),
            Some(e) => {
                if let Some(other) = owner[e] {
                    fail(
                        &mut report,
                        format!("edge {{{u},{v}}} is mapped by leaves {other} and {}", n.id),
                    );
                }
                owner[e] = Some(n.id);
                leaf[index[&n.id]] = Some(e);
            }
        }
    }
    for (e, o) in owner.iter().enumerate() {
        if o.is_none() {
            let (u, v) = g.edge_ids(e);
            fail(&mut report, format!("edge {{{u},{v}}} has no leaf"));
        }
    }
    if g.m() < 2 {
        fail(
            &mut report,
            "a decomposition needs at least two graph edges".into(),
        );
    }
    if tree_edges.len() + 1 != count {
        fail(
            &mut report,
            format!("{count} nodes but {} tree edges", tree_edges.len()),
        );
    }
    for i in 0..count {
        let want = if leaf[i].is_some() { 1 } else { 3 };
        if adj[i].len() != want {
            let kind = if leaf[i].is_some() {
                "leaf"
            } else {
                "internal node"
            };
            fail(
                &mut report,
                format!("{kind} {} has degree {}", node_ids[i], adj[i].len()),
            );
        }
    }
    if !report.failures.is_empty() {
        return (report, None);
    }
    // Connected with n-1 edges means a tree.
    let mut seen = vec![false; count];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    if seen.iter().any(|&s| !s) {
        fail(&mut report, "decomposition tree is not connected".into());
        return (report, None);
    }

    let mut edges = Vec::with_capacity(tree_edges.len());
    let mut omega = Vec::with_capacity(tree_edges.len());
    let mut order = Vec::with_capacity(tree_edges.len());
    for &(a, b) in &tree_edges {
        let (i, j) = (index[&a], index[&b]);
        let in_f = side_edges(&adj, &leaf, g.m(), i, j);
        let f_edges: Vec<usize> = (0..g.m()).filter(|&e| in_f[e]).collect();
        let mid = middle_set(g, &in_f);
        let target: Option<Vec<usize>> = match tree.pi.get(&(a, b)) {
            None => None,
            Some(t) => match t
                .iter()
                .map(|&v| g.index_of(v))
                .collect::<Option<Vec<usize>>>()
            {
                Some(t) => Some(t),
                None => {
                    fail(
                        &mut report,
                        format!("cyclic order of {a}-{b} names an unknown vertex"),
                    );
                    Some(Vec::new())
                }
            },
        };
        let noose = noose::find_noose(emb, &in_f, &f_edges, target.as_deref());
        let to_ids = |vs: &[usize]| vs.iter().map(|&v| g.id(v)).collect::<Vec<_>>();
        match &noose {
            Some(nz) if nz.omega == mid => {}
            Some(_) => fail(
                &mut report,
                format!("noose of {a}-{b} disagrees with its middle set"),
            ),
            None if target.is_some() => fail(
                &mut report,
                format!("no noose of {a}-{b} realizes the given cyclic order"),
            ),
            None => fail(
                &mut report,
                format!("no noose separates the sides of {a}-{b}"),
            ),
        }
        report.edges.push(EdgeCheck {
            edge: (a, b),
            middle_set: to_ids(&mid),
            pi: noose.as_ref().map(|nz| to_ids(&nz.order)),
        });
        report.width = report.width.max(mid.len());
        edges.push((i, j));
        omega.push(mid);
        order.push(noose.map(|nz| nz.order).unwrap_or_default());
    }
    report.valid = report.failures.is_empty();
    if !report.valid {
        return (report, None);
    }
    let width = report.width;
    let d = ScDecomposition {
        graph: g.clone(),
        node_ids,
        adj,
        leaf,
        edges,
        omega,
        order,
        width,
    };
    (report, Some(d))
}

/// Graph edges at leaves on `i`'s side of the tree edge `{i, j}`.
fn side_edges(
    adj: &[Vec<usize>],
    leaf: &[Option<usize>],
    m: usize,
    i: usize,
    j: usize,
) -> Vec<bool> {
    let mut in_f = vec![false; m];
    let mut stack = vec![(i, j)];
    while let Some((x, from)) = stack.pop() {
        if let Some(e) = leaf[x] {
            in_f[e] = true;
        }
        for &y in &adj[x] {
            if y != from {
                stack.push((y, x));
            }
        }
    }
    in_f
}

/// Vertices incident to edges on both sides, ascending.
pub(crate) fn middle_set(g: &Graph, in_f: &[bool]) -> Vec<usize> {
    let mut touch = vec![0u8; g.n()];
    for e in 0..g.m() {
        let (a, b) = g.endpoints(e);
        let bit = if in_f[e] { 1 } else { 2 };
        touch[a] |= bit;
        touch[b] |= bit;
    }
    (0..g.n()).filter(|&v| touch[v] == 3).collect()
}

impl ScDecomposition {
    pub fn from_tree(emb: &PlaneEmbedding, tree: &DecompositionTree) -> Result<Self> {
        let (report, d) = analyze(emb, tree);
        d.ok_or_else(|| Error::Decomposition(report.failures.join("; ")))
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn node_count(&self) -> usize {
        self.node_ids.len()
    }

    pub fn leaf_count(&self) -> usize {
        self.leaf.iter().filter(|l| l.is_some()).count()
    }

    /// Tree edges as node-id pairs `(a, b)` with `a < b`, ascending.
    pub fn tree_edges(&self) -> Vec<(u32, u32)> {
        self.edges
            .iter()
            .map(|&(i, j)| (self.node_ids[i], self.node_ids[j]))
            .collect()
    }

    fn edge_index(&self, a: u32, b: u32) -> Result<usize> {
        let key = crate::graph::ordered(a, b);
        self.tree_edges()
            .iter()
            .position(|&e| e == key)
            .ok_or_else(|| Error::Decomposition(format!("no tree edge {a}-{b}")))
    }

    pub fn middle_set(&self, a: u32, b: u32) -> Result<VertexSet> {
        let k = self.edge_index(a, b)?;
        Ok(self.omega[k].iter().map(|&v| self.graph.id(v)).collect())
    }

    pub fn cyclic_order(&self, a: u32, b: u32) -> Result<Vec<VertexId>> {
        let k = self.edge_index(a, b)?;
        Ok(self.order[k].iter().map(|&v| self.graph.id(v)).collect())
    }

    /// Graph edges on `a`'s side of the tree edge `{a, b}`.
    pub fn side(&self, a: u32, b: u32) -> Result<EdgeSet> {
        self.edge_index(a, b)?;
        let (i, j) = (self.node_index(a)?, self.node_index(b)?);
        let in_f = side_edges(&self.adj, &self.leaf, self.graph.m(), i, j);
        Ok((0..self.graph.m())
            .filter(|&e| in_f[e])
            .map(|e| self.graph.edge_ids(e))
            .collect())
    }

    fn node_index(&self, id: u32) -> Result<usize> {
        self.node_ids
            .binary_search(&id)
            .map_err(|_| Error::Decomposition(format!("no tree node {id}")))
    }

    pub fn to_tree(&self) -> DecompositionTree {
        let nodes = (0..self.node_ids.len())
            .map(|i| TreeNode {
                id: self.node_ids[i],
                neighbors: self.adj[i].iter().map(|&j| self.node_ids[j]).collect(),
                leaf_edge: self.leaf[i].map(|e| self.graph.edge_ids(e)),
            })
            .collect();
        let pi = self
            .tree_edges()
            .into_iter()
            .zip(&self.order)
            .map(|(k, o)| (k, o.iter().map(|&v| self.graph.id(v)).collect()))
            .collect();
        DecompositionTree { nodes, pi }
    }

    pub fn to_json(&self) -> String {
        self.to_tree().to_json()
    }

    pub fn to_text(&self) -> String {
        self.to_tree().to_text()
    }
}
