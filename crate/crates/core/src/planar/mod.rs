//! Planarity testing, combinatorial embeddings and planarization.
//!
//! An embedding is a rotation system: for every vertex the cyclic order of
//! its neighbours. Directed edges ("darts") are numbered `offset[v] + i` for
//! the `i`-th entry of `v`'s rotation. The dart following `u → v` on a face
//! is `v → w` where `w` comes right after `u` in the rotation of `v`.

mod dmp;
mod planarize;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

pub use planarize::{planarize, PlanarizationResult};

#[derive(Clone, Debug)]
pub struct PlaneEmbedding {
    graph: Graph,
    rot: Vec<Vec<usize>>,
    offset: Vec<usize>,
    dart_tail: Vec<usize>,
    dart_head: Vec<usize>,
    dart_edge: Vec<usize>,
    rev: Vec<usize>,
    faces: Vec<Vec<usize>>,
    dart_face: Vec<usize>,
    dart_pos: Vec<usize>,
}

/// Computes a planar embedding of a connected graph.
pub fn planarity_embed(g: &Graph) -> Result<PlaneEmbedding> {
    g.require_connected()?;
    let rot = dmp::planar_rotation(g).ok_or(Error::NotPlanar)?;
    PlaneEmbedding::from_dense_rotation(g.clone(), rot)
}

pub fn is_planar(g: &Graph) -> Result<bool> {
    g.require_connected()?;
    Ok(dmp::planar_rotation(g).is_some())
}

impl PlaneEmbedding {
    /// Builds an embedding from per-vertex cyclic neighbour orders, checking
    /// that the rotation system describes a plane graph.
    pub fn from_rotation(g: &Graph, rotation: &BTreeMap<VertexId, Vec<VertexId>>) -> Result<Self> {
        g.require_connected()?;
        let mut rot = vec![Vec::new(); g.n()];
        for (&v, order) in rotation {
            let i = g.require(v)?;
            rot[i] = order.iter().map(|&u| g.require(u)).collect::<Result<_>>()?;
        }
        PlaneEmbedding::from_dense_rotation(g.clone(), rot)
    }

    pub(crate) fn from_dense_rotation(graph: Graph, rot: Vec<Vec<usize>>) -> Result<Self> {
        let n = graph.n();
        for (v, order) in rot.iter().enumerate() {
            let mut sorted = order.clone();
            sorted.sort_unstable();
            if sorted != graph.adj(v) {
                return Err(Error::InvalidGraph(format!(
                    "rotation at vertex {} does not list its neighbours exactly once",
                    graph.id(v)
                )));
            }
        }
        let mut offset = Vec::with_capacity(n + 1);
        let mut total = 0;
        for order in &rot {
            offset.push(total);
            total += order.len();
        }
        offset.push(total);
        let mut dart_tail = Vec::with_capacity(total);
        let mut dart_head = Vec::with_capacity(total);
        let mut dart_edge = Vec::with_capacity(total);
        for (v, order) in rot.iter().enumerate() {
            for &u in order {
                dart_tail.push(v);
                dart_head.push(u);
                dart_edge.push(graph.edge_between(v, u).expect("neighbour"));
            }
        }
        let pos_in = |v: usize, u: usize| rot[v].iter().position(|&x| x == u).expect("neighbour");
        let rev: Vec<usize> = (0..total)
            .map(|d| offset[dart_head[d]] + pos_in(dart_head[d], dart_tail[d]))
            .collect();

        let mut emb = PlaneEmbedding {
            graph,
            rot,
            offset,
            dart_tail,
            dart_head,
            dart_edge,
            rev,
            faces: Vec::new(),
            dart_face: vec![usize::MAX; total],
            dart_pos: vec![0; total],
        };
        for start in 0..total {
            if emb.dart_face[start] != usize::MAX {
                continue;
            }
            let f = emb.faces.len();
            let mut walk = Vec::new();
            let mut d = start;
            loop {
                emb.dart_face[d] = f;
                emb.dart_pos[d] = walk.len();
                walk.push(d);
                d = emb.next_dart(d);
                if d == start {
                    break;
                }
            }
            emb.faces.push(walk);
        }
        let (v, e, f) = (n as i64, emb.graph.m() as i64, emb.face_count() as i64);
        if v - e + f != 2 {
            return Err(Error::InvalidGraph(format!(
                "rotation system has Euler characteristic {} instead of 2",
                v - e + f
            )));
        }
        Ok(emb)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Cyclic neighbour order of `v`.
    pub fn rotation(&self, v: VertexId) -> Result<Vec<VertexId>> {
        let i = self.graph.require(v)?;
        Ok(self.rot[i].iter().map(|&u| self.graph.id(u)).collect())
    }

    /// Number of faces; an edgeless single vertex has one face.
    pub fn face_count(&self) -> usize {
        self.faces.len().max(1)
    }

    /// Face boundaries as closed vertex walks (tails of the face's darts).
    pub fn faces(&self) -> Vec<Vec<VertexId>> {
        if self.faces.is_empty() {
            return vec![vec![self.graph.id(0)]];
        }
        self.faces
            .iter()
            .map(|walk| {
                walk.iter()
                    .map(|&d| self.graph.id(self.dart_tail[d]))
                    .collect()
            })
            .collect()
    }

    /// Bipartite vertex–face incidence graph. Vertex `v` of rank `i` (in
    /// ascending id order) becomes node `i + 1`; face `f` becomes node
    /// `n + f + 1`.
    pub fn radial_graph(&self) -> Graph {
        let n = self.graph.n() as VertexId;
        let mut edges = Vec::new();
        for (f, walk) in self.faces.iter().enumerate() {
            for &d in walk {
                edges.push((self.dart_tail[d] as VertexId + 1, n + f as VertexId + 1));
            }
        }
        let nodes = 1..=n + self.face_count() as VertexId;
        if self.faces.is_empty() {
            edges.push((1, 2));
        }
        Graph::new(nodes, edges).expect("radial graph is simple after merging")
    }

    pub fn to_json(&self) -> String {
        let rotation: BTreeMap<String, Vec<VertexId>> = (0..self.graph.n())
            .map(|v| {
                let order = self.rot[v].iter().map(|&u| self.graph.id(u)).collect();
                (self.graph.id(v).to_string(), order)
            })
            .collect();
        serde_json::to_string(&EmbeddingJson { rotation }).expect("embedding serializes")
    }

    pub fn from_json(g: &Graph, text: &str) -> Result<Self> {
        let raw: EmbeddingJson = serde_json::from_str(text)?;
        let mut rotation = BTreeMap::new();
        for (k, order) in raw.rotation {
            let v: VertexId = k.parse().map_err(|_| {
                Error::InvalidGraph(format!("rotation key {k:?} is not a vertex id"))
            })?;
            rotation.insert(v, order);
        }
        PlaneEmbedding::from_rotation(g, &rotation)
    }

    // Dart-level access used by the decomposition code.

    pub(crate) fn dart_count(&self) -> usize {
        self.dart_tail.len()
    }

    pub(crate) fn next_dart(&self, d: usize) -> usize {
        let v = self.dart_head[d];
        let back = self.rev[d] - self.offset[v];
        self.offset[v] + (back + 1) % self.rot[v].len()
    }

    pub(crate) fn prev_dart(&self, d: usize) -> usize {
        // The dart entering tail(d) right before d on its face.
        let v = self.dart_tail[d];
        let i = d - self.offset[v];
        let deg = self.rot[v].len();
        self.rev[self.offset[v] + (i + deg - 1) % deg]
    }

    pub(crate) fn dart_tail(&self, d: usize) -> usize {
        self.dart_tail[d]
    }

    pub(crate) fn dart_edge(&self, d: usize) -> usize {
        self.dart_edge[d]
    }

    pub(crate) fn dart_face(&self, d: usize) -> usize {
        self.dart_face[d]
    }

    pub(crate) fn dart_pos(&self, d: usize) -> usize {
        self.dart_pos[d]
    }

    pub(crate) fn darts_from(&self, v: usize) -> std::ops::Range<usize> {
        self.offset[v]..self.offset[v + 1]
    }
}

#[derive(Serialize, Deserialize)]
struct EmbeddingJson {
    rotation: BTreeMap<String, Vec<VertexId>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::instances;

    fn check_faces_partition_darts(e: &PlaneEmbedding) {
        let mut seen = vec![0; e.dart_count()];
        for walk in &e.faces {
            for &d in walk {
                seen[d] += 1;
            }
        }
        assert!(seen.iter().all(|&c| c == 1));
        for d in 0..e.dart_count() {
            assert_eq!(e.next_dart(e.prev_dart(d)), d);
        }
    }

    #[test]
    fn ring_has_two_faces() {
        let e = planarity_embed(&cycle(6)).unwrap();
        assert_eq!(e.face_count(), 2);
        check_faces_partition_darts(&e);
        let r = e.radial_graph();
        assert_eq!((r.n(), r.m()), (8, 12));
    }

    #[test]
    fn small_radial_graphs() {
        let e = planarity_embed(&path(2)).unwrap();
        assert_eq!(e.face_count(), 1);
        let r = e.radial_graph();
        assert_eq!((r.n(), r.m()), (3, 2));
        let r = planarity_embed(&star(3)).unwrap().radial_graph();
        assert_eq!((r.n(), r.m()), (5, 4));
        let single = planarity_embed(&Graph::new([4], []).unwrap()).unwrap();
        assert_eq!(single.face_count(), 1);
    }

    #[test]
    fn kuratowski_graphs_are_not_planar() {
        assert!(matches!(
            planarity_embed(&complete(5)),
            Err(Error::NotPlanar)
        ));
        let k33 = Graph::from_edges([1, 2, 3].into_iter().flat_map(|a| [(a, 4), (a, 5), (a, 6)]))
            .unwrap();
        assert!(!is_planar(&k33).unwrap());
        assert!(is_planar(&complete(4)).unwrap());
    }

    #[test]
    fn ieee14_embeds_with_eight_faces() {
        let g = instances::load("ieee14").unwrap();
        let e = planarity_embed(&g).unwrap();
        assert_eq!(e.face_count(), 20 - 14 + 2);
        check_faces_partition_darts(&e);
    }

    #[test]
    fn bundled_planarity_flags() {
        for r in &instances::REFERENCES {
            let g = instances::load(r.name).unwrap();
            assert_eq!(is_planar(&g).unwrap(), r.planar, "{}", r.name);
        }
    }

    #[test]
    fn json_round_trip_and_validation() {
        let g = instances::load("ieee9").unwrap();
        let e = planarity_embed(&g).unwrap();
        let back = PlaneEmbedding::from_json(&g, &e.to_json()).unwrap();
        assert_eq!(back.faces(), e.faces());

        // A rotation system of K4 with genus 1.
        let k4 = complete(4);
        let bad = r#"{"rotation":{"1":[2,3,4],"2":[1,3,4],"3":[1,2,4],"4":[1,2,3]}}"#;
        assert!(PlaneEmbedding::from_json(&k4, bad).is_err());
        let missing = r#"{"rotation":{"1":[2,3],"2":[1,3,4],"3":[1,2,4],"4":[1,2,3]}}"#;
        assert!(PlaneEmbedding::from_json(&k4, missing).is_err());
    }

    #[test]
    fn disconnected_input_is_rejected() {
        let g = Graph::from_edges([(1, 2), (3, 4)]).unwrap();
        assert!(matches!(planarity_embed(&g), Err(Error::Disconnected)));
    }
}
