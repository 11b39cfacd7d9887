//! Combining the colorings of two sibling tree edges.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{DisjointSets, VertexId};
use crate::scd::MergeContext;

use super::coloring::{marks_for, BasicColor, Coloring, MAX_WIDTH, NO_BLOCK};

/// The basic color a shared vertex takes in the parent, if the children
/// agree on it.
fn combine(c1: BasicColor, c2: BasicColor) -> Option<BasicColor> {
    use BasicColor::*;
    match (c1, c2) {
        (One, One) => Some(One),
        (One, _) | (_, One) => None,
        (Hat, Hat) => Some(Hat),
        _ => Some(Zero),
    }
}

/// Per-vertex consistency of basic colors over the three middle sets. A
/// vertex of the parent's middle set with `None` as its parent color is
/// never valid, and vice versa.
fn vertex_consistent(
    ce: Option<BasicColor>,
    c1: Option<BasicColor>,
    c2: Option<BasicColor>,
) -> bool {
    match (ce, c1, c2) {
        (Some(ce), Some(c1), None) => ce == c1,
        (Some(ce), None, Some(c2)) => ce == c2,
        (Some(ce), Some(c1), Some(c2)) => combine(c1, c2) == Some(ce),
        (None, Some(c1), Some(c2)) => !matches!(combine(c1, c2), None | Some(BasicColor::Hat)),
        _ => false,
    }
}

/// True when the three basic colorings can describe one solution.
///
/// Colorings are keyed by vertex; their key sets must be the three middle
/// sets described by `ctx`.
pub fn consistent_basic(
    c_e: &BTreeMap<VertexId, BasicColor>,
    c_e1: &BTreeMap<VertexId, BasicColor>,
    c_e2: &BTreeMap<VertexId, BasicColor>,
    ctx: &MergeContext,
) -> bool {
    let parent = ctx.x1.union(&ctx.x2).union(&ctx.x3);
    let left = ctx.x1.union(&ctx.x3).union(&ctx.x4);
    let right = ctx.x2.union(&ctx.x3).union(&ctx.x4);
    let keys =
        |m: &BTreeMap<VertexId, BasicColor>| m.keys().copied().collect::<crate::graph::VertexSet>();
    if keys(c_e) != parent || keys(c_e1) != left || keys(c_e2) != right {
        return false;
    }
    let all = parent.union(&ctx.x4);
    let ok = all.iter().all(|v| {
        vertex_consistent(
            c_e.get(v).copied(),
            c_e1.get(v).copied(),
            c_e2.get(v).copied(),
        )
    });
    ok
}

/// Result of a successful merge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Merged {
    pub coloring: Coloring,
    /// Chosen vertices counted by both children.
    pub delta: u32,
}

/// Position bookkeeping for one internal tree edge.
pub(crate) struct Layout {
    k1: usize,
    k2: usize,
    /// Vertices in both children: positions in each and whether they leave.
    shared: Vec<(usize, usize, bool)>,
    x4_mask: u32,
    /// Source positions in the children for each parent position.
    sources: Vec<(Option<usize>, Option<usize>)>,
    in_parent1: Vec<bool>,
    in_parent2: Vec<bool>,
    shared_index1: Vec<Option<usize>>,
    shared_index2: Vec<Option<usize>>,
}

impl Layout {
    pub(crate) fn new<T: Ord + Copy + std::fmt::Debug>(
        pe: &[T],
        p1: &[T],
        p2: &[T],
    ) -> Result<Layout> {
        let width = pe.len().max(p1.len()).max(p2.len());
        if width > MAX_WIDTH {
            return Err(Error::Domain(format!(
                "middle set of {width} vertices exceeds the supported width {MAX_WIDTH}"
            )));
        }
        let pos = |order: &[T], v: T| order.iter().position(|&x| x == v);
        let mut shared = Vec::new();
        let mut shared_index1 = vec![None; p1.len()];
        let mut shared_index2 = vec![None; p2.len()];
        for (i, &v) in p1.iter().enumerate() {
            match pos(p2, v) {
                Some(j) => {
                    shared_index1[i] = Some(shared.len());
                    shared_index2[j] = Some(shared.len());
                    shared.push((i, j, pos(pe, v).is_none()));
                }
                None if pos(pe, v).is_none() => {
                    return Err(Error::Decomposition(format!(
                        "vertex {v:?} lies in one middle set only"
                    )));
                }
                None => {}
            }
        }
        for &v in p2 {
            if pos(p1, v).is_none() && pos(pe, v).is_none() {
                return Err(Error::Decomposition(format!(
                    "vertex {v:?} lies in one middle set only"
                )));
            }
        }
        let mut sources = Vec::with_capacity(pe.len());
        for &v in pe {
            let s = (pos(p1, v), pos(p2, v));
            if s == (None, None) {
                return Err(Error::Decomposition(format!(
                    "vertex {v:?} lies in one middle set only"
                )));
            }
            sources.push(s);
        }
        let x4_mask = shared
            .iter()
            .enumerate()
            .filter(|(_, s)| s.2)
            .fold(0u32, |m, (k, _)| m | (1 << k));
        Ok(Layout {
            k1: p1.len(),
            k2: p2.len(),
            shared,
            x4_mask,
            sources,
            in_parent1: p1.iter().map(|&v| pos(pe, v).is_some()).collect(),
            in_parent2: p2.iter().map(|&v| pos(pe, v).is_some()).collect(),
            shared_index1,
            shared_index2,
        })
    }

    fn is_root(&self) -> bool {
        self.sources.is_empty()
    }

    /// Decodes a child coloring; `first` selects the left child.
    pub(crate) fn prepare(&self, c: Coloring, cost: u32, first: bool) -> Result<Prepared> {
        let (k, in_parent, shared_index) = if first {
            (self.k1, &self.in_parent1, &self.shared_index1)
        } else {
            (self.k2, &self.in_parent2, &self.shared_index2)
        };
        if c.len() != k {
            return Err(Error::MalformedState(format!(
                "{c} has length {}, expected {k}",
                c.len()
            )));
        }
        let labels = c.blocks()?;
        let mut p = Prepared {
            coloring: c,
            cost,
            basic: [BasicColor::Hat; MAX_WIDTH],
            block: [NO_BLOCK; MAX_WIDTH],
            blocks: 0,
            touches: 0,
            ones: 0,
            hats: 0,
        };
        for i in 0..k {
            let b = c.get(i).basic();
            p.basic[i] = b;
            p.block[i] = labels[i];
            if labels[i] != NO_BLOCK {
                p.blocks = p.blocks.max(labels[i] + 1);
                if in_parent[i] {
                    p.touches |= 1 << labels[i];
                }
            }
            if let Some(s) = shared_index[i] {
                match b {
                    BasicColor::One => p.ones |= 1 << s,
                    BasicColor::Hat => p.hats |= 1 << s,
                    BasicColor::Zero => {}
                }
            }
        }
        Ok(p)
    }

    /// Merges two prepared child colorings whose chosen shared vertices
    /// agree. Returns `None` when they are incompatible.
    pub(crate) fn merge(&self, a: &Prepared, b: &Prepared) -> Result<Option<(Coloring, u32)>> {
        if a.ones != b.ones {
            return Err(Error::Internal(
                "merging colorings that disagree on chosen vertices".into(),
            ));
        }
        if a.hats & b.hats & self.x4_mask != 0 {
            return Ok(None);
        }
        let na = usize::from(a.blocks);
        let nb = usize::from(b.blocks);
        let mut dsu = DisjointSets::new(na + nb);
        for &(i, j, _) in &self.shared {
            let (x, y) = (a.block[i], b.block[j]);
            if x != NO_BLOCK && y != NO_BLOCK {
                dsu.union(usize::from(x), na + usize::from(y));
            }
        }
        let mut touched = [false; 2 * MAX_WIDTH];
        for x in 0..na {
            if a.touches & (1 << x) != 0 {
                touched[dsu.find(x)] = true;
            }
        }
        for y in 0..nb {
            if b.touches & (1 << y) != 0 {
                touched[dsu.find(na + y)] = true;
            }
        }
        let delta = a.ones.count_ones();
        let cost = (a.cost.saturating_add(b.cost)).saturating_sub(delta);
        if self.is_root() {
            let r = (na + nb > 0).then(|| dsu.find(0));
            let single = r.is_some_and(|r| (0..na + nb).all(|x| dsu.find(x) == r));
            return Ok(single.then_some((Coloring::EMPTY, cost)));
        }
        if (0..na + nb).any(|x| !touched[dsu.find(x)]) {
            return Ok(None);
        }
        let k = self.sources.len();
        let mut basic = [BasicColor::Hat; MAX_WIDTH];
        let mut labels = [NO_BLOCK; MAX_WIDTH];
        for (p, &src) in self.sources.iter().enumerate() {
            let (c, l) = match src {
                (Some(i), None) => (Some(a.basic[i]), block_root(&mut dsu, a.block[i], 0)),
                (None, Some(j)) => (Some(b.basic[j]), block_root(&mut dsu, b.block[j], na)),
                (Some(i), Some(j)) => {
                    let l = match a.block[i] {
                        NO_BLOCK => block_root(&mut dsu, b.block[j], na),
                        x => block_root(&mut dsu, x, 0),
                    };
                    (combine(a.basic[i], b.basic[j]), l)
                }
                (None, None) => (None, NO_BLOCK),
            };
            basic[p] = c.ok_or_else(|| Error::Internal("inconsistent shared vertex".into()))?;
            labels[p] = l;
        }
        let colors = marks_for(&basic[..k], &labels[..k])?;
        Ok(Some((Coloring::new(&colors)?, cost)))
    }

    /// Key grouping child colorings that agree on chosen shared vertices.
    pub(crate) fn group_key(p: &Prepared) -> u32 {
        p.ones
    }
}

fn block_root(dsu: &mut DisjointSets, label: u8, offset: usize) -> u8 {
    if label == NO_BLOCK {
        NO_BLOCK
    } else {
        dsu.find(offset + usize::from(label)) as u8
    }
}

/// A child coloring decoded for merging.
pub(crate) struct Prepared {
    pub coloring: Coloring,
    pub cost: u32,
    basic: [BasicColor; MAX_WIDTH],
    block: [u8; MAX_WIDTH],
    blocks: u8,
    /// Blocks reaching the parent's middle set.
    touches: u32,
    /// Shared vertices colored 1 and hat, by shared index.
    ones: u32,
    hats: u32,
}

/// Merges two detailed colorings given the cyclic orders of the parent and
/// child middle sets. Returns `None` when the basic colorings are
/// inconsistent or the blocks cannot be merged; an empty parent order
/// merges at the root, where exactly one component must remain.
pub fn merge_compatible(
    c1: &Coloring,
    c2: &Coloring,
    order_e: &[VertexId],
    order_e1: &[VertexId],
    order_e2: &[VertexId],
) -> Result<Option<Merged>> {
    let layout = Layout::new(order_e, order_e1, order_e2)?;
    let a = layout.prepare(*c1, 0, true)?;
    let b = layout.prepare(*c2, 0, false)?;
    let colors1: BTreeMap<_, _> = order_e1.iter().copied().zip(c1.basic()).collect();
    let colors2: BTreeMap<_, _> = order_e2.iter().copied().zip(c2.basic()).collect();
    let consistent = order_e1.iter().chain(order_e2).all(|v| {
        let (x, y) = (colors1.get(v).copied(), colors2.get(v).copied());
        match (x, y) {
            (Some(x), Some(y)) => {
                let leaving = !order_e.contains(v);
                let parent = combine(x, y);
                parent.is_some() && (!leaving || vertex_consistent(None, Some(x), Some(y)))
            }
            _ => true,
        }
    });
    if !consistent {
        return Ok(None);
    }
    Ok(layout.merge(&a, &b)?.map(|(coloring, _)| Merged {
        coloring,
        delta: a.ones.count_ones(),
    }))
}
