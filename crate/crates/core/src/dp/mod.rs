//! Dynamic programming over a rooted sphere-cut decomposition.
//!
//! For every tree edge `e` the table maps a detailed coloring of the middle
//! set to the fewest vertices of `G_e` realizing it. A set `D` realizes a
//! coloring when every vertex of `G_e` off the middle set is chosen or
//! dominated, the middle set shows the coloring's domination status, and the
//! components of `(V(G_e), I_D(E(G_e)))` restricted to vertices incident to a
//! covered edge each reach the middle set and trace its blocks. Dominated
//! vertices therefore sit inside blocks and hat vertices never do.

mod coloring;
mod merge;

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId, VertexSet};
use crate::planar::planarize;
use crate::protection::is_rcds;
use crate::scd::{best_heuristic_sphere_cut, root_decomposition, RootedScd, ScDecomposition};
use crate::solvers::{bnb_min_rcds, brute_force_min_rcds, Method, SolveResult, SolveStats, Timer};

pub use coloring::{BasicColor, Color, Coloring, Mark, MAX_WIDTH, NO_BLOCK};
pub use merge::{consistent_basic, merge_compatible, Merged};

use merge::Layout;

/// Values of one tree edge, with the child colorings behind each value.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValueTable {
    width: usize,
    entries: BTreeMap<Coloring, u32>,
    pointers: BTreeMap<Coloring, (Coloring, Coloring)>,
}

impl ValueTable {
    fn new(width: usize) -> Self {
        ValueTable {
            width,
            ..Self::default()
        }
    }

    /// Size of the middle set the colorings range over.
    pub fn width(&self) -> usize {
        self.width
    }

    /// Number of finite entries.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The value of `c`, `None` standing for infinity.
    pub fn get(&self, c: &Coloring) -> Option<u32> {
        self.entries.get(c).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Coloring, u32)> + '_ {
        self.entries.iter().map(|(c, v)| (*c, *v))
    }

    /// The child colorings that produced the value of `c`.
    pub fn pointer(&self, c: &Coloring) -> Option<(Coloring, Coloring)> {
        self.pointers.get(c).copied()
    }

    /// Keeps the first strictly smallest value.
    fn offer(&mut self, c: Coloring, cost: u32, from: Option<(Coloring, Coloring)>) {
        let better = self.entries.get(&c).map_or(true, |&old| cost < old);
        if better {
            self.entries.insert(c, cost);
            if let Some(p) = from {
                self.pointers.insert(c, p);
            }
        }
    }

    /// `{"coloring": cost}` for every finite entry.
    pub fn to_json(&self) -> String {
        self.to_value().to_string()
    }

    fn to_value(&self) -> Value {
        let map: Map<String, Value> = self
            .iter()
            .map(|(c, v)| (c.to_string(), json!(v)))
            .collect();
        Value::Object(map)
    }
}

/// Leaf table for the graph edge `edge` with middle set `order` (in its
/// cyclic order).
pub fn leaf_table(edge: (VertexId, VertexId), order: &[VertexId]) -> Result<ValueTable> {
    if !order.iter().all(|&v| v == edge.0 || v == edge.1) {
        return Err(Error::Domain(format!(
            "middle set {order:?} is not within edge {edge:?}"
        )));
    }
    leaf_values(order.len())
}

fn leaf_values(k: usize) -> Result<ValueTable> {
    use Color::*;
    use Mark::*;
    let rows: &[(&[Color], u32)] = match k {
        1 => &[(&[Zero(Single)], 1), (&[One(Single)], 1)],
        2 => &[
            (&[Zero(Open), One(Close)], 1),
            (&[Hat, Hat], 0),
            (&[One(Open), Zero(Close)], 1),
            (&[One(Open), One(Close)], 2),
        ],
        _ => {
            return Err(Error::Domain(format!(
                "leaf middle set of size {k}, expected 1 or 2"
            )))
        }
    };
    let mut t = ValueTable::new(k);
    for (colors, v) in rows {
        t.offer(Coloring::new(colors)?, *v, None);
    }
    Ok(t)
}

/// All tables of a rooted decomposition, indexed by rooted tree edge.
#[derive(Clone, Debug)]
pub struct DpTables {
    tables: Vec<ValueTable>,
    root_edge: usize,
    root_value: u32,
}

impl DpTables {
    /// Minimum cardinality of a perfect protection set.
    pub fn root_value(&self) -> u32 {
        self.root_value
    }

    pub fn table(&self, e: usize) -> &ValueTable {
        &self.tables[e]
    }

    /// Total number of finite entries over all tables.
    pub fn entry_count(&self) -> u64 {
        self.tables.iter().map(|t| t.len() as u64).sum()
    }

    /// Per-edge dump: middle set order and table.
    pub fn to_json(&self, r: &RootedScd) -> String {
        let edges: Vec<Value> = (0..self.tables.len())
            .map(|e| {
                json!({
                    "edge": e,
                    "order": r.cyclic_order(e),
                    "table": self.tables[e].to_value(),
                })
            })
            .collect();
        json!({ "root_value": self.root_value, "edges": edges }).to_string()
    }
}

/// Fills the tables bottom-up. The root edge has an empty middle set and a
/// single entry whose value is the answer.
pub fn dp_recursion(r: &RootedScd) -> Result<DpTables> {
    let mut tables = vec![ValueTable::default(); r.edge_count()];
    for &e in r.post_order() {
        tables[e] = if r.is_leaf(e) {
            leaf_values(r.order_dense(e).len())?
        } else {
            let [c1, c2] = r.children(e) else {
                return Err(Error::Decomposition(format!(
                    "internal tree edge {e} needs two children"
                )));
            };
            merge_tables(r, e, (*c1, &tables[*c1]), (*c2, &tables[*c2]))?
        };
    }
    let root_edge = r.root_edge();
    let root_value = tables[root_edge]
        .get(&Coloring::EMPTY)
        .ok_or_else(|| Error::Internal("no feasible coloring at the root".into()))?;
    Ok(DpTables {
        tables,
        root_edge,
        root_value,
    })
}

fn merge_tables(
    r: &RootedScd,
    e: usize,
    (e1, t1): (usize, &ValueTable),
    (e2, t2): (usize, &ValueTable),
) -> Result<ValueTable> {
    let layout = Layout::new(r.order_dense(e), r.order_dense(e1), r.order_dense(e2))?;
    let mut groups: BTreeMap<u32, Vec<_>> = BTreeMap::new();
    for (c, v) in t2.iter() {
        let p = layout.prepare(c, v, false)?;
        groups.entry(Layout::group_key(&p)).or_default().push(p);
    }
    let mut out = ValueTable::new(r.order_dense(e).len());
    for (c, v) in t1.iter() {
        let a = layout.prepare(c, v, true)?;
        let Some(group) = groups.get(&Layout::group_key(&a)) else {
            continue;
        };
        for b in group {
            if let Some((merged, cost)) = layout.merge(&a, b)? {
                out.offer(merged, cost, Some((a.coloring, b.coloring)));
            }
        }
    }
    Ok(out)
}

/// Recovers an optimal set by following the pointers down from the root.
pub fn traceback(t: &DpTables, r: &RootedScd) -> Result<VertexSet> {
    let g = r.graph();
    let mut chosen = VertexSet::new();
    let mut stack = vec![(t.root_edge, Coloring::EMPTY)];
    while let Some((e, c)) = stack.pop() {
        if let Some(edge) = r.leaf_dense(e) {
            let order = r.order_dense(e);
            for (i, &v) in order.iter().enumerate() {
                if c.get(i).basic() == BasicColor::One {
                    chosen.insert(g.id(v));
                }
            }
            if order.len() == 1 && c.get(0).basic() != BasicColor::One {
                let (a, b) = g.endpoints(edge);
                let pendant = if a == order[0] { b } else { a };
                chosen.insert(g.id(pendant));
            }
            continue;
        }
        let (c1, c2) = t.tables[e]
            .pointer(&c)
            .ok_or_else(|| Error::Internal(format!("no pointer for {c} at tree edge {e}")))?;
        let ch = r.children(e);
        stack.push((ch[0], c1));
        stack.push((ch[1], c2));
    }
    if chosen.len() != t.root_value as usize || !is_rcds(g, &chosen)? {
        return Err(Error::Internal(format!(
            "traceback produced {} vertices, expected a perfect set of {}",
            chosen.len(),
            t.root_value
        )));
    }
    Ok(chosen)
}

/// Runs the dynamic program over `d` rooted at its first tree edge.
pub fn solve_decomposition(d: &ScDecomposition) -> Result<SolveResult> {
    let timer = Timer::start();
    let r = root_decomposition(d, None)?;
    let t = dp_recursion(&r)?;
    let set = traceback(&t, &r)?;
    let stats = SolveStats {
        nodes: t.entry_count(),
        seconds: timer.seconds(),
        optimal: true,
        width: Some(d.width()),
        ..SolveStats::default()
    };
    Ok(SolveResult::new(set, Method::Dp, stats))
}

/// Minimum perfect protection set of a planar graph by dynamic programming.
///
/// A nonplanar graph is planarized first; the answer is then a perfect set
/// for the original graph but possibly not a minimum one, and `optimal` is
/// false. Graphs with at most two edges are enumerated directly.
pub fn solve_planar_rcds(g: &Graph) -> Result<SolveResult> {
    g.require_connected()?;
    let timer = Timer::start();
    if g.m() <= 2 {
        let mut r = brute_force_min_rcds(g, None)?;
        r.method = Method::Dp;
        r.stats.note = Some("enumerated: too few edges to decompose".into());
        return Ok(r);
    }
    let p = planarize(g)?;
    let removed = p.removed_edges.len();
    let mut result = match best_heuristic_sphere_cut(&p.embedding) {
        Ok(d) => solve_decomposition(&d)?,
        Err(err) => {
            let mut r = bnb_min_rcds(&p.planar_graph)?;
            r.stats.note = Some(format!(
                "decomposition failed ({err}); solved by branch and bound"
            ));
            r
        }
    };
    if !is_rcds(g, &result.set)? {
        return Err(Error::Internal(
            "planar solution is not perfect on the input graph".into(),
        ));
    }
    result.stats.seconds = timer.seconds();
    if removed > 0 {
        result.stats.removed_edges = Some(removed);
        result.stats.optimal = false;
    }
    Ok(result)
}
