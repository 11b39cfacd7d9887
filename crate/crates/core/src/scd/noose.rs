//! Nooses separating an edge set from its complement.
//!
//! A noose is a closed curve through vertices and faces of the plane graph
//! that meets the graph only at vertices. For an edge set `F` it must pass
//! through every vertex carrying both `F` and non-`F` edges exactly once, so
//! around such a vertex the `F` edges form one contiguous interval of the
//! rotation. The curve enters the vertex through one boundary corner of that
//! interval and leaves through the other; inside each face it follows
//! non-crossing chords between such corners. A face may be crossed more than
//! once, which happens around bridges and cut vertices.
//!
//! Corners are named by the dart leaving the vertex right after the corner,
//! so a corner's face and position along the face walk are those of its dart.

use std::collections::BTreeMap;

use crate::graph::DisjointSets;
use crate::planar::PlaneEmbedding;

/// Upper bound on chord combinations tried per edge set.
const COMBINATION_LIMIT: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Noose {
    /// Vertices on the noose, ascending (dense indices).
    pub omega: Vec<usize>,
    /// Cyclic order of `omega` along the noose, canonical form.
    pub order: Vec<usize>,
}

/// Finds a noose separating `in_f` (indexed by graph edge) from the other
/// edges. `f_edges` lists the edges of `F`. With `target` the noose must
/// visit the vertices in that cyclic order (in either direction).
pub(crate) fn find_noose(
    emb: &PlaneEmbedding,
    in_f: &[bool],
    f_edges: &[usize],
    target: Option<&[usize]>,
) -> Option<Noose> {
    let g = emb.graph();
    if f_edges.is_empty() || f_edges.len() == g.m() {
        let ok = target.map_or(true, |t| t.is_empty());
        return ok.then(|| Noose {
            omega: Vec::new(),
            order: Vec::new(),
        });
    }
    let mut touched: Vec<usize> = f_edges
        .iter()
        .flat_map(|&e| {
            let (a, b) = g.endpoints(e);
            [a, b]
        })
        .collect();
    touched.sort_unstable();
    touched.dedup();

    // Transition corners per boundary vertex.
    let mut omega = Vec::new();
    let mut passage: BTreeMap<usize, usize> = BTreeMap::new();
    let mut is_transition = vec![false; emb.dart_count()];
    for &v in &touched {
        let darts = emb.darts_from(v);
        let deg = darts.len();
        let base = darts.start;
        let class = |i: usize| in_f[emb.dart_edge(base + i % deg)];
        let corners: Vec<usize> = (0..deg)
            .filter(|&i| class(i) != class(i + 1))
            .map(|i| base + (i + 1) % deg)
            .collect();
        match corners.len() {
            0 => continue,
            2 => {
                omega.push(v);
                passage.insert(corners[0], corners[1]);
                passage.insert(corners[1], corners[0]);
                is_transition[corners[0]] = true;
                is_transition[corners[1]] = true;
            }
            _ => return None,
        }
    }
    if omega.is_empty() {
        return None;
    }
    if let Some(t) = target {
        let mut sorted = t.to_vec();
        sorted.sort_unstable();
        if sorted != omega {
            return None;
        }
    }

    // Corners grouped by face, in face-walk order.
    let mut by_face: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &c in passage.keys() {
        by_face.entry(emb.dart_face(c)).or_default().push(c);
    }
    let mut faces: Vec<Vec<usize>> = Vec::with_capacity(by_face.len());
    for (_, mut corners) in by_face {
        if corners.len() % 2 == 1 {
            return None;
        }
        corners.sort_by_key(|&c| emb.dart_pos(c));
        faces.push(corners);
    }
    let options: Vec<Vec<Vec<(usize, usize)>>> = faces
        .iter()
        .map(|c| non_crossing_matchings(c.len()))
        .collect();

    let target = target.map(canonical_cycle);
    let mut choice = vec![0usize; faces.len()];
    let mut partner: BTreeMap<usize, usize> = BTreeMap::new();
    for _ in 0..COMBINATION_LIMIT {
        partner.clear();
        for (k, corners) in faces.iter().enumerate() {
            for &(i, j) in &options[k][choice[k]] {
                partner.insert(corners[i], corners[j]);
                partner.insert(corners[j], corners[i]);
            }
        }
        if let Some(order) = single_cycle(emb, &passage, &partner) {
            let order = canonical_cycle(&order);
            let matches = target.as_ref().map_or(true, |t| *t == order);
            if matches && separates(emb, in_f, &is_transition, &partner) {
                return Some(Noose { omega, order });
            }
        }
        // Odometer over the per-face matchings.
        let mut k = 0;
        loop {
            if k == faces.len() {
                return None;
            }
            choice[k] += 1;
            if choice[k] < options[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
    None
}

/// Follows chord and passage links alternately; returns the vertex order if
/// they form one cycle through every corner.
fn single_cycle(
    emb: &PlaneEmbedding,
    passage: &BTreeMap<usize, usize>,
    partner: &BTreeMap<usize, usize>,
) -> Option<Vec<usize>> {
    let start = *passage.keys().next()?;
    let mut order = Vec::with_capacity(passage.len() / 2);
    let mut c = start;
    loop {
        order.push(emb.dart_tail(c));
        let out = passage[&c];
        c = partner[&out];
        if c == start {
            break;
        }
        if order.len() > passage.len() {
            return None;
        }
    }
    (order.len() * 2 == passage.len()).then_some(order)
}

/// Checks that the curve leaves exactly two sides, `F` and its complement.
fn separates(
    emb: &PlaneEmbedding,
    in_f: &[bool],
    is_transition: &[bool],
    partner: &BTreeMap<usize, usize>,
) -> bool {
    let g = emb.graph();
    let mut dsu = DisjointSets::new(g.m());
    for c in 0..emb.dart_count() {
        if !is_transition[c] {
            dsu.union(emb.dart_edge(emb.prev_dart(c)), emb.dart_edge(c));
        }
    }
    for (&p, &q) in partner {
        dsu.union(emb.dart_edge(emb.prev_dart(p)), emb.dart_edge(q));
    }
    let mut roots = [usize::MAX; 2];
    for e in 0..g.m() {
        let side = usize::from(in_f[e]);
        let r = dsu.find(e);
        if roots[side] == usize::MAX {
            roots[side] = r;
        } else if roots[side] != r {
            return false;
        }
    }
    roots[0] != roots[1]
}

/// All non-crossing perfect matchings of `0..len` points on a circle.
fn non_crossing_matchings(len: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(lo: usize, hi: usize) -> Vec<Vec<(usize, usize)>> {
        if lo >= hi {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        let mut j = lo + 1;
        while j < hi {
            for inner in rec(lo + 1, j) {
                for outer in rec(j + 1, hi) {
                    let mut m = vec![(lo, j)];
                    m.extend(inner.iter().copied());
                    m.extend(outer.iter().copied());
                    out.push(m);
                }
            }
            j += 2;
        }
        out
    }
    rec(0, len)
}

/// Lexicographically smallest rotation of the sequence or of its reverse.
pub(crate) fn canonical_cycle<T: Ord + Copy>(seq: &[T]) -> Vec<T> {
    let n = seq.len();
    let mut best: Option<Vec<T>> = None;
    let reversed: Vec<T> = seq.iter().rev().copied().collect();
    for s in [seq, &reversed[..]] {
        for k in 0..n {
            let cand: Vec<T> = s[k..].iter().chain(&s[..k]).copied().collect();
            if best.as_ref().map_or(true, |b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::Graph;
    use crate::planar::planarity_embed;

    fn noose_for(g: &Graph, f: &[(u32, u32)]) -> Option<Noose> {
        let emb = planarity_embed(g).unwrap();
        let mut in_f = vec![false; g.m()];
        let mut f_edges = Vec::new();
        for &(u, v) in f {
            let e = g.edge_between_ids(u, v).unwrap();
            in_f[e] = true;
            f_edges.push(e);
        }
        find_noose(&emb, &in_f, &f_edges, None)
    }

    #[test]
    fn matchings_are_catalan() {
        let counts: Vec<usize> = (0..6)
            .map(|k| non_crossing_matchings(2 * k).len())
            .collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 14, 42]);
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(canonical_cycle(&[3, 1, 2]), vec![1, 2, 3]);
        assert_eq!(canonical_cycle(&[2, 1, 3]), vec![1, 2, 3]);
        assert_eq!(canonical_cycle(&[1, 4, 2, 3]), vec![1, 3, 2, 4]);
        assert_eq!(canonical_cycle::<u32>(&[]), Vec::<u32>::new());
    }

    #[test]
    fn ring_halves() {
        let g = cycle(6);
        let n = noose_for(&g, &[(1, 2), (2, 3), (3, 4)]).unwrap();
        assert_eq!(n.omega, vec![0, 3]);
        // Two separated edges: the curve alternates between the two faces.
        let n = noose_for(&g, &[(1, 2), (3, 4)]).unwrap();
        assert_eq!(n.order, vec![0, 1, 2, 3]);
    }

    #[test]
    fn pendant_and_bridge_edges() {
        // Two triangles joined by the bridge 3-4, plus the pendant edge 6-7.
        let g = Graph::from_edges([
            (1, 2),
            (2, 3),
            (1, 3),
            (3, 4),
            (4, 5),
            (5, 6),
            (4, 6),
            (6, 7),
        ])
        .unwrap();
        let bridge = noose_for(&g, &[(3, 4)]).unwrap();
        assert_eq!(bridge.omega.len(), 2);
        let pendant = noose_for(&g, &[(6, 7)]).unwrap();
        assert_eq!(pendant.omega, vec![g.index_of(6).unwrap()]);
        let left = noose_for(&g, &[(1, 2), (2, 3), (1, 3)]).unwrap();
        assert_eq!(left.omega, vec![g.index_of(3).unwrap()]);
        let star = noose_for(&star(3), &[(1, 2), (1, 3)]).unwrap();
        assert_eq!(star.omega, vec![0]);
    }

    #[test]
    fn interleaved_sides_at_a_vertex_fail() {
        let g = star(4);
        // Rotation at the centre alternates F and non-F edges.
        let emb = planarity_embed(&g).unwrap();
        let rot = emb.rotation(1).unwrap();
        let f = [(1, rot[0]), (1, rot[2])];
        assert!(noose_for(&g, &f).is_none());
    }
}
