use std::cmp::Reverse;

use crate::error::Result;
use crate::graph::{component_labels, count_components, DisjointSets, Graph};
use crate::protection::perfect_mask;

use super::{Method, SolveResult, SolveStats, Timer};

#[derive(Clone, Debug, Default)]
pub struct BnbOptions {
    /// Stop after this many search nodes; the result is then the incumbent
    /// and `stats.optimal` is false.
    pub node_limit: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum St {
    Out,
    Undecided,
    In,
}

struct Search<'g> {
    g: &'g Graph,
    st: Vec<St>,
    in_count: usize,
    best: Vec<bool>,
    best_size: usize,
    nodes: u64,
    limit: Option<u64>,
    truncated: bool,
    mark: Vec<u32>,
    stamp: u32,
}

impl<'g> Search<'g> {
    fn new(g: &'g Graph, incumbent: Vec<bool>, opts: &BnbOptions) -> Self {
        let best_size = incumbent.iter().filter(|&&b| b).count();
        Search {
            g,
            st: vec![St::Undecided; g.n()],
            in_count: 0,
            best: incumbent,
            best_size,
            nodes: 0,
            limit: opts.node_limit,
            truncated: false,
            mark: vec![0; g.n()],
            stamp: 0,
        }
    }

    /// Counts the node and reports whether the budget is exhausted.
    fn enter(&mut self) -> bool {
        self.nodes += 1;
        if let Some(limit) = self.limit {
            if self.nodes > limit {
                self.truncated = true;
            }
        }
        self.truncated
    }

    fn in_mask(&self) -> Vec<bool> {
        self.st.iter().map(|&s| s == St::In).collect()
    }

    fn record(&mut self) {
        if self.in_count < self.best_size {
            self.best = self.in_mask();
            self.best_size = self.in_count;
        }
    }

    fn next_stamp(&mut self) -> u32 {
        self.stamp += 1;
        self.stamp
    }

    fn is_dominated(&self, v: usize) -> bool {
        self.st[v] == St::In || self.g.adj(v).iter().any(|&u| self.st[u] == St::In)
    }

    fn closed_candidates(&self, v: usize) -> Vec<usize> {
        std::iter::once(v)
            .chain(self.g.adj(v).iter().copied())
            .filter(|&u| self.st[u] == St::Undecided)
            .collect()
    }

    /// Lower bound on the number of further vertices needed to dominate
    /// everything, or `None` when some vertex can no longer be dominated.
    fn domination_bound(&mut self, undominated: &[usize]) -> Option<usize> {
        if undominated.is_empty() {
            return Some(0);
        }
        let mut cands: Vec<(usize, Vec<usize>)> = Vec::with_capacity(undominated.len());
        for &u in undominated {
            let c = self.closed_candidates(u);
            if c.is_empty() {
                return None;
            }
            cands.push((u, c));
        }
        cands.sort_by_key(|(u, c)| (c.len(), *u));
        let stamp = self.next_stamp();
        let mut packing = 0;
        for (_, c) in &cands {
            if c.iter().all(|&x| self.mark[x] != stamp) {
                packing += 1;
                for &x in c {
                    self.mark[x] = stamp;
                }
            }
        }
        // Coverage bound: no vertex dominates more than `cover` of them.
        let stamp = self.next_stamp();
        for &u in undominated {
            self.mark[u] = stamp;
        }
        let mut cover = 1;
        for v in 0..self.g.n() {
            if self.st[v] != St::Undecided {
                continue;
            }
            let c = usize::from(self.mark[v] == stamp)
                + self
                    .g
                    .adj(v)
                    .iter()
                    .filter(|&&u| self.mark[u] == stamp)
                    .count();
            cover = cover.max(c);
        }
        Some(packing.max(undominated.len().div_ceil(cover)))
    }

    fn sort_candidates(&self, c: &mut Vec<usize>) {
        c.sort_by_key(|&v| (Reverse(self.g.degree_at(v)), v));
        c.dedup();
    }

    fn branch(&mut self, cands: Vec<usize>, rec: fn(&mut Self)) {
        for &c in &cands {
            self.st[c] = St::In;
            self.in_count += 1;
            rec(self);
            self.st[c] = St::Out;
            self.in_count -= 1;
            if self.truncated {
                break;
            }
        }
        for &c in &cands {
            self.st[c] = St::Undecided;
        }
    }

    fn undominated(&self) -> Vec<usize> {
        (0..self.g.n()).filter(|&v| !self.is_dominated(v)).collect()
    }

    fn rcds(&mut self) {
        if self.enter() {
            return;
        }
        let g = self.g;
        let (labels, comps) = component_labels(g, |e| {
            let (a, b) = g.endpoints(e);
            self.st[a] == St::In || self.st[b] == St::In
        });
        if comps == 1 {
            self.record();
            return;
        }
        if self.in_count + 1 >= self.best_size {
            return;
        }
        let possible = count_components(g, |e| {
            let (a, b) = g.endpoints(e);
            self.st[a] != St::Out || self.st[b] != St::Out
        });
        if possible > 1 {
            return;
        }
        let undominated = self.undominated();
        let Some(dom) = self.domination_bound(&undominated) else {
            return;
        };
        let Some(merge) = self.merge_bound(&labels, comps) else {
            return;
        };
        if self.in_count + dom.max(merge) >= self.best_size {
            return;
        }

        // Some edge leaving each component must gain a protected endpoint;
        // branch on the component with the fewest ways to do that.
        let mut per_comp: Vec<Vec<usize>> = vec![Vec::new(); comps];
        for e in 0..g.m() {
            let (a, b) = g.endpoints(e);
            if labels[a] == labels[b] {
                continue;
            }
            for x in [a, b] {
                if self.st[x] == St::Undecided {
                    per_comp[labels[a]].push(x);
                    per_comp[labels[b]].push(x);
                }
            }
        }
        for c in per_comp.iter_mut() {
            c.sort_unstable();
            c.dedup();
        }
        let Some(mut cands) = per_comp.into_iter().min_by_key(|c| c.len()) else {
            return;
        };
        if cands.is_empty() {
            return;
        }
        self.sort_candidates(&mut cands);
        self.branch(cands, Self::rcds);
    }

    /// Each new vertex merges at most the components it and its neighbours
    /// lie in, so enough vertices must be added to absorb `comps - 1` merges.
    fn merge_bound(&mut self, labels: &[usize], comps: usize) -> Option<usize> {
        let mut gains = Vec::new();
        let mut seen = vec![usize::MAX; comps];
        for v in 0..self.g.n() {
            if self.st[v] != St::Undecided {
                continue;
            }
            let mut distinct = 0;
            for u in std::iter::once(v).chain(self.g.adj(v).iter().copied()) {
                if seen[labels[u]] != v {
                    seen[labels[u]] = v;
                    distinct += 1;
                }
            }
            if distinct > 1 {
                gains.push(distinct - 1);
            }
        }
        gains.sort_unstable_by(|a, b| b.cmp(a));
        let mut need = comps - 1;
        for (k, gain) in gains.iter().enumerate() {
            if need <= *gain {
                return Some(k + 1);
            }
            need -= gain;
        }
        None
    }

    fn dominating(&mut self) {
        if self.enter() {
            return;
        }
        let undominated = self.undominated();
        if undominated.is_empty() {
            self.record();
            return;
        }
        let Some(lb) = self.domination_bound(&undominated) else {
            return;
        };
        if self.in_count + lb >= self.best_size {
            return;
        }
        let mut cands = undominated
            .iter()
            .map(|&u| self.closed_candidates(u))
            .min_by_key(|c| c.len())
            .expect("nonempty");
        self.sort_candidates(&mut cands);
        self.branch(cands, Self::dominating);
    }

    fn connected_dominating(&mut self) {
        if self.enter() {
            return;
        }
        let g = self.g;
        if self.in_count > 0 {
            // Protected vertices must stay mutually reachable through
            // vertices that may still be chosen.
            let (labels, _) = component_labels(g, |e| {
                let (a, b) = g.endpoints(e);
                self.st[a] != St::Out && self.st[b] != St::Out
            });
            let mut it = (0..g.n()).filter(|&v| self.st[v] == St::In);
            let first = labels[it.next().expect("in_count > 0")];
            if it.any(|v| labels[v] != first) {
                return;
            }
        }
        let (labels, _) = component_labels(g, |e| {
            let (a, b) = g.endpoints(e);
            self.st[a] == St::In && self.st[b] == St::In
        });
        let mut groups: Vec<usize> = (0..g.n())
            .filter(|&v| self.st[v] == St::In)
            .map(|v| labels[v])
            .collect();
        groups.sort_unstable();
        groups.dedup();
        let undominated = self.undominated();
        if undominated.is_empty() && groups.len() == 1 {
            self.record();
            return;
        }
        let Some(mut lb) = self.domination_bound(&undominated) else {
            return;
        };
        if groups.len() > 1 {
            lb = lb.max(1);
        }
        if self.in_count + lb >= self.best_size {
            return;
        }
        let mut cands = if undominated.is_empty() {
            let mut best: Option<Vec<usize>> = None;
            for &grp in &groups {
                let mut c: Vec<usize> = (0..g.n())
                    .filter(|&v| self.st[v] == St::In && labels[v] == grp)
                    .flat_map(|v| g.adj(v).iter().copied())
                    .filter(|&u| self.st[u] == St::Undecided)
                    .collect();
                c.sort_unstable();
                c.dedup();
                if best.as_ref().map_or(true, |b| c.len() < b.len()) {
                    best = Some(c);
                }
            }
            best.expect("at least two groups")
        } else {
            undominated
                .iter()
                .map(|&u| self.closed_candidates(u))
                .min_by_key(|c| c.len())
                .expect("nonempty")
        };
        if cands.is_empty() {
            return;
        }
        self.sort_candidates(&mut cands);
        self.branch(cands, Self::connected_dominating);
    }
}

fn finish(search: Search<'_>, method: Method, timer: Timer) -> SolveResult {
    let stats = SolveStats {
        nodes: search.nodes,
        seconds: timer.seconds(),
        optimal: !search.truncated,
        ..SolveStats::default()
    };
    SolveResult::new(search.g.set_from_mask(&search.best), method, stats)
}

/// Removes vertices (lowest degree first) while `ok` still holds.
fn prune(g: &Graph, mask: &mut [bool], ok: impl Fn(&[bool]) -> bool) {
    let mut order: Vec<usize> = (0..g.n()).filter(|&v| mask[v]).collect();
    order.sort_by_key(|&v| (g.degree_at(v), Reverse(v)));
    for v in order {
        mask[v] = false;
        if !ok(mask) {
            mask[v] = true;
        }
    }
}

/// Greedy perfect protection set: repeatedly protect the vertex merging the
/// most components of `(V, I_D(E))`.
fn greedy_rcds(g: &Graph) -> Vec<bool> {
    let mut mask = vec![false; g.n()];
    loop {
        let (labels, comps) = component_labels(g, |e| {
            let (a, b) = g.endpoints(e);
            mask[a] || mask[b]
        });
        if comps == 1 {
            break;
        }
        let mut seen = vec![usize::MAX; comps];
        let pick = (0..g.n())
            .filter(|&v| !mask[v])
            .max_by_key(|&v| {
                let mut distinct = 0;
                for u in std::iter::once(v).chain(g.adj(v).iter().copied()) {
                    if seen[labels[u]] != v {
                        seen[labels[u]] = v;
                        distinct += 1;
                    }
                }
                (distinct, g.degree_at(v), Reverse(v))
            })
            .expect("an unprotected vertex remains while disconnected");
        mask[pick] = true;
    }
    prune(g, &mut mask, |m| perfect_mask(g, m));
    mask
}

fn dominates(g: &Graph, mask: &[bool]) -> bool {
    crate::protection::is_dominating_mask(g, mask)
}

fn greedy_dominating(g: &Graph) -> Vec<bool> {
    let mut mask = vec![false; g.n()];
    let mut dominated = vec![false; g.n()];
    while dominated.iter().any(|&d| !d) {
        let pick = (0..g.n())
            .filter(|&v| !mask[v])
            .max_by_key(|&v| {
                let gain = std::iter::once(v)
                    .chain(g.adj(v).iter().copied())
                    .filter(|&u| !dominated[u])
                    .count();
                (gain, g.degree_at(v), Reverse(v))
            })
            .expect("an undominated vertex has an unchosen candidate");
        mask[pick] = true;
        dominated[pick] = true;
        for &u in g.adj(pick) {
            dominated[u] = true;
        }
    }
    prune(g, &mut mask, |m| dominates(g, m));
    mask
}

fn induced_connected(g: &Graph, mask: &[bool]) -> bool {
    let members: Vec<usize> = (0..g.n()).filter(|&v| mask[v]).collect();
    if members.is_empty() {
        return false;
    }
    let mut dsu = DisjointSets::new(g.n());
    for e in 0..g.m() {
        let (a, b) = g.endpoints(e);
        if mask[a] && mask[b] {
            dsu.union(a, b);
        }
    }
    let r = dsu.find(members[0]);
    members.iter().all(|&v| dsu.find(v) == r)
}

/// Internal vertices of a BFS tree from a maximum-degree vertex.
fn greedy_cds(g: &Graph) -> Vec<bool> {
    let root = (0..g.n())
        .max_by_key(|&v| (g.degree_at(v), Reverse(v)))
        .expect("nonempty");
    let mut mask = vec![false; g.n()];
    let mut seen = vec![false; g.n()];
    seen[root] = true;
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &u in g.adj(v) {
            if !seen[u] {
                seen[u] = true;
                mask[v] = true;
                queue.push_back(u);
            }
        }
    }
    if !mask.iter().any(|&b| b) {
        mask[root] = true;
    }
    prune(g, &mut mask, |m| dominates(g, m) && induced_connected(g, m));
    mask
}

/// Minimum relaxed connected dominating set by branch and bound.
pub fn bnb_min_rcds(g: &Graph) -> Result<SolveResult> {
    bnb_min_rcds_with(g, &BnbOptions::default())
}

pub fn bnb_min_rcds_with(g: &Graph, opts: &BnbOptions) -> Result<SolveResult> {
    g.require_connected()?;
    let timer = Timer::start();
    let mut search = Search::new(g, greedy_rcds(g), opts);
    search.rcds();
    Ok(finish(search, Method::Bnb, timer))
}

/// Minimum dominating set by the same search with domination-only
/// feasibility. Does not require a connected graph.
pub fn min_dominating_set(g: &Graph) -> Result<SolveResult> {
    let timer = Timer::start();
    let mut search = Search::new(g, greedy_dominating(g), &BnbOptions::default());
    search.dominating();
    Ok(finish(search, Method::DominatingSet, timer))
}

/// Minimum dominating set inducing a connected subgraph.
pub fn min_connected_dominating_set(g: &Graph) -> Result<SolveResult> {
    g.require_connected()?;
    let timer = Timer::start();
    let mut search = Search::new(g, greedy_cds(g), &BnbOptions::default());
    search.connected_dominating();
    Ok(finish(search, Method::ConnectedDominatingSet, timer))
}
