//! Path-addition planarity test (Demoucron, Malgrange and Pertuiset) run on
//! each biconnected block; block rotations are concatenated at cut vertices.

use std::collections::VecDeque;

use crate::graph::Graph;

/// Dense rotation system of a planar embedding, or `None` if `g` is not
/// planar. `g` must be connected.
pub(crate) fn planar_rotation(g: &Graph) -> Option<Vec<Vec<usize>>> {
    let mut rot = vec![Vec::new(); g.n()];
    for block in biconnected_blocks(g) {
        if block.len() == 1 {
            let (a, b) = g.endpoints(block[0]);
            rot[a].push(b);
            rot[b].push(a);
            continue;
        }
        for (v, order) in embed_block(g, &block)? {
            rot[v].extend(order);
        }
    }
    Some(rot)
}

/// Edge sets of the biconnected blocks, found with an iterative Tarjan walk.
pub(crate) fn biconnected_blocks(g: &Graph) -> Vec<Vec<usize>> {
    const UNSET: usize = usize::MAX;
    let n = g.n();
    let mut disc = vec![UNSET; n];
    let mut low = vec![0; n];
    let mut time = 0;
    let mut blocks = Vec::new();
    let mut edge_stack: Vec<usize> = Vec::new();
    for root in 0..n {
        if disc[root] != UNSET {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        // (vertex, edge to parent, next neighbour index)
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, UNSET, 0)];
        while let Some(top) = stack.last_mut() {
            let (v, pe, i) = *top;
            if i < g.adj(v).len() {
                top.2 += 1;
                let (u, e) = (g.adj(v)[i], g.incident(v)[i]);
                if e == pe {
                    continue;
                }
                if disc[u] == UNSET {
                    edge_stack.push(e);
                    disc[u] = time;
                    low[u] = time;
                    time += 1;
                    stack.push((u, e, 0));
                } else if disc[u] < disc[v] {
                    edge_stack.push(e);
                    low[v] = low[v].min(disc[u]);
                }
                continue;
            }
            stack.pop();
            if let Some(&(p, _, _)) = stack.last() {
                low[p] = low[p].min(low[v]);
                if low[v] >= disc[p] {
                    let mut block = Vec::new();
                    while let Some(e) = edge_stack.pop() {
                        block.push(e);
                        if e == pe {
                            break;
                        }
                    }
                    block.sort_unstable();
                    blocks.push(block);
                }
            }
        }
    }
    blocks
}

struct Fragment {
    attachments: Vec<usize>,
    /// Interior vertices; empty for a single chord.
    inner: Vec<usize>,
}

/// Embeds one biconnected block with at least two edges. Returns the
/// rotation of every block vertex restricted to block edges.
fn embed_block(g: &Graph, block: &[usize]) -> Option<Vec<(usize, Vec<usize>)>> {
    let n = g.n();
    let mut in_block = vec![false; g.m()];
    for &e in block {
        in_block[e] = true;
    }
    let in_block_ref = &in_block;
    let block_adj = |v: usize| {
        g.adj(v)
            .iter()
            .zip(g.incident(v))
            .filter(move |(_, &e)| in_block_ref[e])
            .map(|(&u, &e)| (u, e))
    };
    let mut vertices: Vec<usize> = block
        .iter()
        .flat_map(|&e| {
            let (a, b) = g.endpoints(e);
            [a, b]
        })
        .collect();
    vertices.sort_unstable();
    vertices.dedup();

    let mut in_h = vec![false; n];
    let mut edge_in_h = vec![false; g.m()];
    let mut embedded = 0;

    // Initial cycle: a DFS tree path closed by the first non-tree edge.
    let cycle = find_cycle(g, &vertices, &in_block)?;
    let mut faces: Vec<Vec<usize>> = vec![cycle.clone(), cycle.iter().rev().copied().collect()];
    for k in 0..cycle.len() {
        let (a, b) = (cycle[k], cycle[(k + 1) % cycle.len()]);
        in_h[a] = true;
        edge_in_h[g.edge_between(a, b)?] = true;
        embedded += 1;
    }
    let mut on_face: Vec<Vec<bool>> = faces.iter().map(|f| membership(n, f)).collect();

    while embedded < block.len() {
        let fragments = find_fragments(g, &vertices, block, &in_h, &edge_in_h, &block_adj);
        let mut choice: Option<(usize, usize)> = None;
        for (k, frag) in fragments.iter().enumerate() {
            let admissible: Vec<usize> = (0..faces.len())
                .filter(|&f| frag.attachments.iter().all(|&a| on_face[f][a]))
                .collect();
            match admissible.len() {
                0 => return None,
                1 => {
                    choice = Some((k, admissible[0]));
                    break;
                }
                _ => {
                    if choice.is_none() {
                        choice = Some((k, admissible[0]));
                    }
                }
            }
        }
        let (k, f) = choice?;
        let path = fragment_path(g, &fragments[k], &in_h, &block_adj);
        for w in path.windows(2) {
            edge_in_h[g.edge_between(w[0], w[1])?] = true;
            embedded += 1;
        }
        for &v in &path {
            in_h[v] = true;
        }

        let face = &faces[f];
        let (a, b) = (path[0], *path.last()?);
        let ia = face.iter().position(|&x| x == a)?;
        let rotated: Vec<usize> = face[ia..].iter().chain(&face[..ia]).copied().collect();
        let ib = rotated.iter().position(|&x| x == b)?;
        let interior = &path[1..path.len() - 1];
        let mut f1: Vec<usize> = rotated[..=ib].to_vec();
        f1.extend(interior.iter().rev());
        let mut f2: Vec<usize> = rotated[ib..].to_vec();
        f2.push(a);
        f2.extend(interior.iter());
        on_face[f] = membership(n, &f1);
        faces[f] = f1;
        on_face.push(membership(n, &f2));
        faces.push(f2);
    }

    // succ_v(u) = w for every consecutive u, v, w along a face.
    let mut succ: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for face in &faces {
        let len = face.len();
        for i in 0..len {
            let (u, v, w) = (face[(i + len - 1) % len], face[i], face[(i + 1) % len]);
            succ[v].push((u, w));
        }
    }
    let mut out = Vec::with_capacity(vertices.len());
    for &v in &vertices {
        let map = &succ[v];
        let start = map.iter().map(|p| p.0).min()?;
        let mut order = vec![start];
        let mut cur = start;
        loop {
            let next = map.iter().find(|p| p.0 == cur)?.1;
            if next == start {
                break;
            }
            order.push(next);
            cur = next;
            if order.len() > map.len() {
                return None;
            }
        }
        debug_assert_eq!(order.len(), map.len());
        out.push((v, order));
    }
    Some(out)
}

fn membership(n: usize, face: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &v in face {
        m[v] = true;
    }
    m
}

fn find_cycle(g: &Graph, vertices: &[usize], in_block: &[bool]) -> Option<Vec<usize>> {
    let n = g.n();
    let root = vertices[0];
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![usize::MAX; n];
    depth[root] = 0;
    let mut stack = vec![root];
    let mut closing = None;
    'dfs: while let Some(v) = stack.pop() {
        for (&u, &e) in g.adj(v).iter().zip(g.incident(v)) {
            if !in_block[e] {
                continue;
            }
            if depth[u] == usize::MAX {
                depth[u] = depth[v] + 1;
                parent[u] = v;
                stack.push(u);
            } else if u != parent[v] && parent[u] != v {
                closing = Some((v, u));
                break 'dfs;
            }
        }
    }
    let (mut a, mut b) = closing?;
    // Walk both ends up to their lowest common ancestor.
    let mut left = vec![a];
    let mut right = vec![b];
    while a != b {
        if depth[a] >= depth[b] {
            a = parent[a];
            left.push(a);
        } else {
            b = parent[b];
            right.push(b);
        }
    }
    right.pop();
    left.extend(right.into_iter().rev());
    Some(left)
}

fn find_fragments<I: Iterator<Item = (usize, usize)>>(
    g: &Graph,
    vertices: &[usize],
    block: &[usize],
    in_h: &[bool],
    edge_in_h: &[bool],
    block_adj: &impl Fn(usize) -> I,
) -> Vec<Fragment> {
    let mut out = Vec::new();
    for &e in block {
        let (a, b) = g.endpoints(e);
        if !edge_in_h[e] && in_h[a] && in_h[b] {
            out.push(Fragment {
                attachments: vec![a, b],
                inner: Vec::new(),
            });
        }
    }
    let mut seen = vec![false; g.n()];
    for &s in vertices {
        if in_h[s] || seen[s] {
            continue;
        }
        seen[s] = true;
        let mut inner = vec![s];
        let mut attachments = Vec::new();
        let mut k = 0;
        while k < inner.len() {
            let v = inner[k];
            k += 1;
            for (u, _) in block_adj(v) {
                if in_h[u] {
                    attachments.push(u);
                } else if !seen[u] {
                    seen[u] = true;
                    inner.push(u);
                }
            }
        }
        attachments.sort_unstable();
        attachments.dedup();
        out.push(Fragment { attachments, inner });
    }
    out
}

/// A path through the fragment between two distinct attachment vertices.
fn fragment_path<I: Iterator<Item = (usize, usize)>>(
    g: &Graph,
    frag: &Fragment,
    in_h: &[bool],
    block_adj: &impl Fn(usize) -> I,
) -> Vec<usize> {
    if frag.inner.is_empty() {
        return frag.attachments.clone();
    }
    let a = frag.attachments[0];
    let mut in_frag = vec![false; g.n()];
    for &v in &frag.inner {
        in_frag[v] = true;
    }
    let mut parent = vec![usize::MAX; g.n()];
    let mut queue = VecDeque::new();
    for (u, _) in block_adj(a) {
        if in_frag[u] && parent[u] == usize::MAX {
            parent[u] = a;
            queue.push_back(u);
        }
    }
    while let Some(v) = queue.pop_front() {
        for (u, _) in block_adj(v) {
            if in_h[u] && u != a {
                let mut path = vec![u, v];
                let mut cur = v;
                while parent[cur] != a {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.push(a);
                path.reverse();
                return path;
            }
            if in_frag[u] && parent[u] == usize::MAX {
                parent[u] = v;
                queue.push_back(u);
            }
        }
    }
    unreachable!("a fragment of a biconnected block has two attachments")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn blocks_of_bowtie_with_tail() {
        // Two triangles sharing vertex 3, plus a pendant edge 5-6.
        let g =
            Graph::from_edges([(1, 2), (2, 3), (1, 3), (3, 4), (4, 5), (3, 5), (5, 6)]).unwrap();
        let mut blocks: Vec<Vec<(u32, u32)>> = biconnected_blocks(&g)
            .into_iter()
            .map(|b| b.into_iter().map(|e| g.edge_ids(e)).collect())
            .collect();
        blocks.sort();
        assert_eq!(
            blocks,
            vec![
                vec![(1, 2), (1, 3), (2, 3)],
                vec![(3, 4), (3, 5), (4, 5)],
                vec![(5, 6)],
            ]
        );
    }

    #[test]
    fn trees_and_cycles() {
        assert!(planar_rotation(&path(5)).is_some());
        assert!(planar_rotation(&cycle(5)).is_some());
        assert_eq!(biconnected_blocks(&path(5)).len(), 4);
        assert_eq!(biconnected_blocks(&cycle(5)).len(), 1);
    }

    #[test]
    fn dense_planar_graphs() {
        // Octahedron and a 3x3 grid with diagonals.
        let octa = Graph::from_edges([
            (1, 2),
            (1, 3),
            (1, 4),
            (1, 5),
            (6, 2),
            (6, 3),
            (6, 4),
            (6, 5),
            (2, 3),
            (3, 4),
            (4, 5),
            (5, 2),
        ])
        .unwrap();
        assert!(planar_rotation(&octa).is_some());
        let mut grid = Vec::new();
        for r in 0..3u32 {
            for c in 0..3u32 {
                let v = r * 3 + c + 1;
                if c < 2 {
                    grid.push((v, v + 1));
                }
                if r < 2 {
                    grid.push((v, v + 3));
                }
                if r < 2 && c < 2 {
                    grid.push((v, v + 4));
                }
            }
        }
        assert!(planar_rotation(&Graph::from_edges(grid).unwrap()).is_some());
        assert!(planar_rotation(&complete(5)).is_none());
    }
}
