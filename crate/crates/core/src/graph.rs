//! Simple undirected graphs with caller-chosen vertex ids.
//!
//! Vertex ids are positive integers preserved from the input (bus numbers
//! for the bundled power networks). Internally every vertex also has a dense
//! index; dense order is ascending id order, so iterating by index is the
//! same as iterating by id.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = u32;

#[derive(Clone, Debug)]
pub struct Graph {
    ids: Vec<VertexId>,
    index: HashMap<VertexId, usize>,
    adj: Vec<Vec<usize>>,
    adj_edges: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    edge_index: HashMap<(usize, usize), usize>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.ids == other.ids && self.edge_list() == other.edge_list()
    }
}

impl Eq for Graph {}

impl Graph {
    /// Builds a graph from explicit vertices plus the endpoints of `edges`.
    /// Duplicate edges are merged; self-loops and id 0 are rejected.
    pub fn new(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self> {
        let mut vset: BTreeSet<VertexId> = vertices.into_iter().collect();
        let mut eset: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop on vertex {u}")));
            }
            vset.insert(u);
            vset.insert(v);
            eset.insert(ordered(u, v));
        }
        if vset.contains(&0) {
            return Err(Error::InvalidGraph("vertex ids must be positive".into()));
        }
        let ids: Vec<VertexId> = vset.into_iter().collect();
        let index: HashMap<VertexId, usize> =
            ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        let mut adj = vec![Vec::new(); ids.len()];
        let mut adj_edges = vec![Vec::new(); ids.len()];
        let mut edges = Vec::with_capacity(eset.len());
        let mut edge_index = HashMap::with_capacity(eset.len());
        for (u, v) in eset {
            let (a, b) = (index[&u], index[&v]);
            let eid = edges.len();
            edges.push((a, b));
            edge_index.insert((a, b), eid);
            adj[a].push(b);
            adj[b].push(a);
            adj_edges[a].push(eid);
            adj_edges[b].push(eid);
        }
        // Neighbour lists sorted by index, edge lists kept aligned.
        for v in 0..ids.len() {
            let mut pairs: Vec<(usize, usize)> = adj[v]
                .iter()
                .copied()
                .zip(adj_edges[v].iter().copied())
                .collect();
            pairs.sort_unstable();
            adj[v] = pairs.iter().map(|p| p.0).collect();
            adj_edges[v] = pairs.iter().map(|p| p.1).collect();
        }
        Ok(Self {
            ids,
            index,
            adj,
            adj_edges,
            edges,
            edge_index,
        })
    }

    pub fn from_edges(edges: impl IntoIterator<Item = (VertexId, VertexId)>) -> Result<Self> {
        Self::new(std::iter::empty(), edges)
    }

    /// The subgraph on the same vertex set keeping only `keep` edges.
    pub fn with_edge_subset(&self, keep: impl Fn(usize) -> bool) -> Graph {
        let edges = (0..self.m()).filter(|&e| keep(e)).map(|e| self.edge_ids(e));
        Graph::new(self.ids.iter().copied(), edges).expect("subgraph of a valid graph")
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Vertex ids in ascending order.
    pub fn vertices(&self) -> &[VertexId] {
        &self.ids
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edge_list(&self) -> Vec<(VertexId, VertexId)> {
        (0..self.m()).map(|e| self.edge_ids(e)).collect()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.index.contains_key(&v)
    }

    pub fn contains_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.edge_between_ids(u, v).is_some()
    }

    pub fn neighbors(&self, v: VertexId) -> Result<impl Iterator<Item = VertexId> + '_> {
        let i = self.require(v)?;
        Ok(self.adj[i].iter().map(move |&j| self.ids[j]))
    }

    pub fn degree(&self, v: VertexId) -> Result<usize> {
        Ok(self.adj[self.require(v)?].len())
    }

    // Dense-index interface used by the algorithms.

    pub fn index_of(&self, v: VertexId) -> Option<usize> {
        self.index.get(&v).copied()
    }

    pub(crate) fn require(&self, v: VertexId) -> Result<usize> {
        self.index_of(v).ok_or(Error::UnknownVertex(v))
    }

    pub fn id(&self, i: usize) -> VertexId {
        self.ids[i]
    }

    pub(crate) fn degree_at(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn adj(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    /// Edge ids incident to dense vertex `i`, aligned with [`Graph::adj`].
    pub fn incident(&self, i: usize) -> &[usize] {
        &self.adj_edges[i]
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn edge_ids(&self, e: usize) -> (VertexId, VertexId) {
        let (a, b) = self.edges[e];
        (self.ids[a], self.ids[b])
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_index.get(&ordered(a, b)).copied()
    }

    pub fn edge_between_ids(&self, u: VertexId, v: VertexId) -> Option<usize> {
        self.edge_between(self.index_of(u)?, self.index_of(v)?)
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || count_components(self, |_| true) == 1
    }

    pub(crate) fn require_connected(&self) -> Result<()> {
        if self.n() == 0 {
            return Err(Error::InvalidGraph("graph has no vertices".into()));
        }
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }

    /// Dense vertex set from ids, rejecting unknown vertices.
    pub(crate) fn mask_of(&self, set: &VertexSet) -> Result<Vec<bool>> {
        let mut mask = vec![false; self.n()];
        for &v in set.iter() {
            mask[self.require(v)?] = true;
        }
        Ok(mask)
    }

    pub(crate) fn set_from_mask(&self, mask: &[bool]) -> VertexSet {
        VertexSet(
            mask.iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| self.ids[i])
                .collect(),
        )
    }

    /// Serializes to the edge-list text format.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (u, v) in self.edge_list() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&GraphJson::from(self)).expect("graph serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: GraphJson = serde_json::from_str(text)?;
        raw.try_into()
    }
}

/// Parses the edge-list text format: one `u v` pair per line, `#` starts a
/// comment, blank lines are ignored.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut edges = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Parse {
                line,
                message: format!("expected two vertex ids, found {:?}", content),
            });
        }
        let parse = |s: &str| -> Result<VertexId> {
            match s.parse::<VertexId>() {
                Ok(v) if v > 0 => Ok(v),
                _ => Err(Error::Parse {
                    line,
                    message: format!("{s:?} is not a positive integer"),
                }),
            }
        };
        let (u, v) = (parse(fields[0])?, parse(fields[1])?);
        if u == v {
            return Err(Error::SelfLoop { line, vertex: u });
        }
        edges.push((u, v));
    }
    Graph::from_edges(edges)
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<[VertexId; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<VertexId>>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        let edges: Vec<[VertexId; 2]> = g.edge_list().into_iter().map(|(u, v)| [u, v]).collect();
        let covered: BTreeSet<VertexId> = edges.iter().flatten().copied().collect();
        let vertices = (covered.len() != g.n()).then(|| g.vertices().to_vec());
        GraphJson {
            n: g.n(),
            edges,
            vertices,
        }
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;

    fn try_from(raw: GraphJson) -> Result<Graph> {
        let g = Graph::new(
            raw.vertices.unwrap_or_default(),
            raw.edges.into_iter().map(|[u, v]| (u, v)),
        )?;
        if g.n() != raw.n {
            return Err(Error::InvalidGraph(format!(
                "\"n\" is {} but the edges cover {} vertices",
                raw.n,
                g.n()
            )));
        }
        Ok(g)
    }
}

/// A sorted set of vertex ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(BTreeSet<VertexId>);

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, v: VertexId) -> bool {
        self.0.insert(v)
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.contains(&v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &VertexId> + '_ {
        self.0.iter()
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.union(&other.0).copied().collect())
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.intersection(&other.0).copied().collect())
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.difference(&other.0).copied().collect())
    }

    pub fn to_vec(&self) -> Vec<VertexId> {
        self.0.iter().copied().collect()
    }
}

impl FromIterator<VertexId> for VertexSet {
    fn from_iter<I: IntoIterator<Item = VertexId>>(iter: I) -> Self {
        VertexSet(iter.into_iter().collect())
    }
}

impl<const N: usize> From<[VertexId; N]> for VertexSet {
    fn from(a: [VertexId; N]) -> Self {
        a.into_iter().collect()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

/// A set of undirected edges, each stored as `(min, max)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeSet(BTreeSet<(VertexId, VertexId)>);

impl EdgeSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, u: VertexId, v: VertexId) -> bool {
        self.0.insert(ordered(u, v))
    }

    pub fn contains(&self, u: VertexId, v: VertexId) -> bool {
        self.0.contains(&ordered(u, v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(VertexId, VertexId)> + '_ {
        self.0.iter()
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        EdgeSet(self.0.union(&other.0).copied().collect())
    }
}

impl FromIterator<(VertexId, VertexId)> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = (VertexId, VertexId)>>(iter: I) -> Self {
        EdgeSet(iter.into_iter().map(|(u, v)| ordered(u, v)).collect())
    }
}

pub(crate) fn ordered<T: Ord>(a: T, b: T) -> (T, T) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Edges of `g` with at least one endpoint in `u`.
pub fn incident_edges(g: &Graph, u: &VertexSet) -> Result<EdgeSet> {
    let mask = g.mask_of(u)?;
    Ok((0..g.m())
        .filter(|&e| {
            let (a, b) = g.endpoints(e);
            mask[a] || mask[b]
        })
        .map(|e| g.edge_ids(e))
        .collect())
}

/// Components of `(V(g), active)`; isolated vertices come out as singletons.
/// Components are listed by their smallest vertex.
pub fn connected_components(g: &Graph, active: &EdgeSet) -> Result<Vec<VertexSet>> {
    let mut on = vec![false; g.m()];
    for &(u, v) in active.iter() {
        let e = g.edge_between_ids(u, v).ok_or(Error::UnknownEdge(u, v))?;
        on[e] = true;
    }
    let (labels, count) = component_labels(g, |e| on[e]);
    let mut out = vec![VertexSet::new(); count];
    for (i, &c) in labels.iter().enumerate() {
        out[c].insert(g.id(i));
    }
    Ok(out)
}

/// Component label per dense vertex for the subgraph of edges accepted by
/// `active`. Labels are numbered in order of each component's smallest vertex.
pub(crate) fn component_labels(g: &Graph, active: impl Fn(usize) -> bool) -> (Vec<usize>, usize) {
    let mut dsu = DisjointSets::new(g.n());
    for e in 0..g.m() {
        if active(e) {
            let (a, b) = g.endpoints(e);
            dsu.union(a, b);
        }
    }
    let mut label = vec![usize::MAX; g.n()];
    let mut root_label = vec![usize::MAX; g.n()];
    let mut count = 0;
    for v in 0..g.n() {
        let r = dsu.find(v);
        if root_label[r] == usize::MAX {
            root_label[r] = count;
            count += 1;
        }
        label[v] = root_label[r];
    }
    (label, count)
}

pub(crate) fn count_components(g: &Graph, active: impl Fn(usize) -> bool) -> usize {
    component_labels(g, active).1
}

/// Union-find with path halving and union by size.
#[derive(Clone, Debug)]
pub(crate) struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn parses_simple_path() {
        let g = parse_edge_list("1 2\n2 3").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edge_list(), vec![(1, 2), (2, 3)]);
    }

    #[test]
    fn parses_ring_with_comments_and_duplicates() {
        let g = parse_edge_list("# ring\n1 2\n2 3\n\n3 4 # tail\n4 5\n5 6\n6 1\n2 1\n").unwrap();
        assert_eq!(g.n(), 6);
        assert_eq!(g.m(), 6);
        assert_eq!(g, cycle(6));
    }

    #[test]
    fn rejects_self_loop_with_line_number() {
        match parse_edge_list("1 2\n1 1") {
            Err(Error::SelfLoop { line: 2, vertex: 1 }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(matches!(
            parse_edge_list("1 2 3"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_edge_list("1\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_edge_list("2 x"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_edge_list("0 1"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_edge_list("-1 2"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn keeps_sparse_ids() {
        let g = parse_edge_list("9533 7\n7 100").unwrap();
        assert_eq!(g.vertices(), &[7, 100, 9533]);
        assert!(g.contains_edge(9533, 7));
        assert_eq!(g.degree(7).unwrap(), 2);
    }

    #[test]
    fn json_round_trip() {
        let g = cycle(5);
        let text = g.to_json();
        assert!(text.starts_with("{\"n\":5,\"edges\":[[1,2]"));
        assert_eq!(Graph::from_json(&text).unwrap(), g);
        assert!(Graph::from_json("{\"n\":4,\"edges\":[[1,2]]}").is_err());
        let lone = Graph::new([1], []).unwrap();
        assert_eq!(Graph::from_json(&lone.to_json()).unwrap(), lone);
    }

    #[test]
    fn incident_edges_on_ring() {
        let g = cycle(6);
        let got = incident_edges(&g, &VertexSet::from([1, 4])).unwrap();
        let want: EdgeSet = [(6, 1), (1, 2), (3, 4), (4, 5)].into_iter().collect();
        assert_eq!(got, want);
        let all: VertexSet = g.vertices().iter().copied().collect();
        assert_eq!(incident_edges(&g, &all).unwrap().len(), 6);
        assert!(incident_edges(&g, &VertexSet::new()).unwrap().is_empty());
        assert!(matches!(
            incident_edges(&g, &VertexSet::from([7])),
            Err(Error::UnknownVertex(7))
        ));
    }

    #[test]
    fn components_on_ring() {
        let g = cycle(6);
        let all: EdgeSet = g.edge_list().into_iter().collect();
        assert_eq!(connected_components(&g, &all).unwrap().len(), 1);
        assert_eq!(connected_components(&g, &EdgeSet::new()).unwrap().len(), 6);

        let active = incident_edges(&g, &VertexSet::from([1])).unwrap();
        let comps = connected_components(&g, &active).unwrap();
        assert_eq!(
            comps,
            vec![
                VertexSet::from([1, 2, 6]),
                VertexSet::from([3]),
                VertexSet::from([4]),
                VertexSet::from([5]),
            ]
        );
    }

    #[test]
    fn connectivity() {
        assert!(cycle(4).is_connected());
        assert!(!Graph::from_edges([(1, 2), (3, 4)]).unwrap().is_connected());
        assert!(Graph::new([5], []).unwrap().is_connected());
        assert!(star(4).is_connected() && path(3).is_connected() && complete(4).is_connected());
    }
}
