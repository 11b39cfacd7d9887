//! Perfect protection checks and stealth attack synthesis.
//!
//! A protection set `D` is perfect when no nonzero measurement perturbation
//! can evade bad-data detection. Two characterizations are provided and must
//! always agree on connected graphs:
//!
//! * [`is_perfect_protection`]: the subgraph `(V, I_D(E))` is connected.
//! * [`is_rcds`]: `D` dominates the graph and any two members are joined by a
//!   relaxed path (consecutive members separated by at most one non-member).
//!
//! When `D` is not perfect, [`construct_stealth_attack`] returns a concrete
//! attack that [`verify_attack`] accepts.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{component_labels, Graph, VertexId, VertexSet};

const TOL: f64 = 1e-9;

/// True iff `(V, I_D(E))` is connected. `g` must be connected.
pub fn is_perfect_protection(g: &Graph, d: &VertexSet) -> Result<bool> {
    g.require_connected()?;
    let mask = g.mask_of(d)?;
    Ok(perfect_mask(g, &mask))
}

pub(crate) fn perfect_mask(g: &Graph, mask: &[bool]) -> bool {
    if g.n() <= 1 {
        return true;
    }
    let (_, count) = component_labels(g, |e| {
        let (a, b) = g.endpoints(e);
        mask[a] || mask[b]
    });
    count == 1
}

/// True iff `D` is a relaxed connected dominating set.
///
/// The relaxed-path condition is tested on an auxiliary graph over `D` that
/// joins two members when they are adjacent or share a neighbour outside `D`;
/// relaxed paths concatenate, so pairwise reachability is connectivity of
/// that graph. A single-vertex graph is protected by the empty set.
pub fn is_rcds(g: &Graph, d: &VertexSet) -> Result<bool> {
    let mask = g.mask_of(d)?;
    Ok(rcds_mask(g, &mask))
}

pub(crate) fn rcds_mask(g: &Graph, mask: &[bool]) -> bool {
    if g.n() <= 1 {
        return true;
    }
    is_dominating_mask(g, mask) && relaxed_connected_mask(g, mask)
}

pub(crate) fn is_dominating_mask(g: &Graph, mask: &[bool]) -> bool {
    (0..g.n()).all(|v| mask[v] || g.adj(v).iter().any(|&u| mask[u]))
}

fn relaxed_connected_mask(g: &Graph, mask: &[bool]) -> bool {
    let members: Vec<usize> = (0..g.n()).filter(|&v| mask[v]).collect();
    let Some(&start) = members.first() else {
        return true;
    };
    let mut seen = vec![false; g.n()];
    seen[start] = true;
    let mut stack = vec![start];
    let mut reached = 1;
    while let Some(d) = stack.pop() {
        for &w in g.adj(d) {
            if mask[w] {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
                continue;
            }
            for &x in g.adj(w) {
                if mask[x] && !seen[x] {
                    seen[x] = true;
                    reached += 1;
                    stack.push(x);
                }
            }
        }
    }
    reached == members.len()
}

/// Per-line proportionality constants between phasor difference and flow.
/// Lines without an entry use 1.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LineConstants(BTreeMap<(VertexId, VertexId), f64>);

impl LineConstants {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, u: VertexId, v: VertexId, h: f64) {
        self.0.insert(crate::graph::ordered(u, v), h);
    }

    pub fn get(&self, u: VertexId, v: VertexId) -> f64 {
        self.0
            .get(&crate::graph::ordered(u, v))
            .copied()
            .unwrap_or(1.0)
    }
}

/// A measurement perturbation `Δz = H θ̃`.
///
/// `flow[(u, v)]` (with `u < v`) is the perturbation of the line flow
/// measured from `u` towards `v`, i.e. `H_uv (θ̃_u − θ̃_v)`. The injection at
/// `v` is the sum over neighbours `w` of the flow from `v` towards `w`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Attack {
    pub phasors: BTreeMap<VertexId, f64>,
    #[serde(with = "edge_keyed")]
    pub flow: BTreeMap<(VertexId, VertexId), f64>,
    pub injection: BTreeMap<VertexId, f64>,
}

impl Attack {
    pub fn is_zero(&self) -> bool {
        self.flow
            .values()
            .chain(self.injection.values())
            .all(|x| x.abs() <= TOL)
    }

    fn flow_from(&self, v: VertexId, w: VertexId) -> Option<f64> {
        if v < w {
            self.flow.get(&(v, w)).copied()
        } else {
            self.flow.get(&(w, v)).map(|f| -f)
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("attack serializes")
    }
}

mod edge_keyed {
    use std::collections::BTreeMap;

    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::graph::VertexId;

    pub fn serialize<S: Serializer>(
        map: &BTreeMap<(VertexId, VertexId), f64>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        let keyed: BTreeMap<String, f64> = map
            .iter()
            .map(|(&(u, v), &x)| (format!("{u}-{v}"), x))
            .collect();
        keyed.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<(VertexId, VertexId), f64>, D::Error> {
        let keyed = BTreeMap::<String, f64>::deserialize(d)?;
        let mut out = BTreeMap::new();
        for (k, x) in keyed {
            let (u, v) = k
                .split_once('-')
                .and_then(|(a, b)| Some((a.parse().ok()?, b.parse().ok()?)))
                .ok_or_else(|| D::Error::custom(format!("bad edge key {k:?}")))?;
            if u >= v {
                return Err(D::Error::custom(format!(
                    "edge key {k:?} must be \"low-high\""
                )));
            }
            out.insert((u, v), x);
        }
        Ok(out)
    }
}

/// Builds a stealth attack against `D`, or `None` when `D` is perfect.
///
/// The component of `(V, I_D(E))` holding the smallest vertex gets phasor 1,
/// every other bus 0. Only lines leaving that component carry flow.
pub fn construct_stealth_attack(
    g: &Graph,
    d: &VertexSet,
    constants: Option<&LineConstants>,
) -> Result<Option<Attack>> {
    g.require_connected()?;
    let mask = g.mask_of(d)?;
    let (labels, count) = component_labels(g, |e| {
        let (a, b) = g.endpoints(e);
        mask[a] || mask[b]
    });
    if count <= 1 {
        return Ok(None);
    }
    let unit = LineConstants::new();
    let h = constants.unwrap_or(&unit);
    let theta = |i: usize| if labels[i] == labels[0] { 1.0 } else { 0.0 };

    let mut attack = Attack::default();
    for i in 0..g.n() {
        attack.phasors.insert(g.id(i), theta(i));
    }
    for e in 0..g.m() {
        let (a, b) = g.endpoints(e);
        let (u, v) = g.edge_ids(e);
        attack
            .flow
            .insert((u, v), h.get(u, v) * (theta(a) - theta(b)));
    }
    for i in 0..g.n() {
        let v = g.id(i);
        let total: f64 = g
            .adj(i)
            .iter()
            .map(|&j| h.get(v, g.id(j)) * (theta(i) - theta(j)))
            .sum();
        attack.injection.insert(v, total);
    }
    Ok(Some(attack))
}

/// Checks attack rules A1/A2 and protection rule P1 with unknown positive
/// line constants: a line carries flow exactly when its end phasors differ,
/// with the sign of the difference.
pub fn verify_attack(g: &Graph, d: &VertexSet, a: &Attack) -> bool {
    verify_impl(g, d, a, None)
}

/// Like [`verify_attack`] but checks A1 against the given line constants.
pub fn verify_attack_with_constants(
    g: &Graph,
    d: &VertexSet,
    a: &Attack,
    constants: &LineConstants,
) -> bool {
    verify_impl(g, d, a, Some(constants))
}

fn verify_impl(g: &Graph, d: &VertexSet, a: &Attack, h: Option<&LineConstants>) -> bool {
    if a.phasors.len() != g.n() || a.injection.len() != g.n() || a.flow.len() != g.m() {
        return false;
    }
    let Ok(mask) = g.mask_of(d) else {
        return false;
    };
    for e in 0..g.m() {
        let (u, v) = g.edge_ids(e);
        let (Some(&tu), Some(&tv), Some(&f)) =
            (a.phasors.get(&u), a.phasors.get(&v), a.flow.get(&(u, v)))
        else {
            return false;
        };
        let diff = tu - tv;
        let a1 = match h {
            Some(h) => (f - h.get(u, v) * diff).abs() <= TOL * (1.0 + f.abs()),
            None => {
                if diff.abs() <= TOL {
                    f.abs() <= TOL
                } else {
                    f.abs() > TOL && f.signum() == diff.signum()
                }
            }
        };
        if !a1 {
            return false;
        }
        // P1: lines touching a protected bus are measured truthfully.
        let (ia, ib) = g.endpoints(e);
        if (mask[ia] || mask[ib]) && f.abs() > TOL {
            return false;
        }
    }
    for i in 0..g.n() {
        let v = g.id(i);
        let Some(&inj) = a.injection.get(&v) else {
            return false;
        };
        let mut total = 0.0;
        for &j in g.adj(i) {
            match a.flow_from(v, g.id(j)) {
                Some(f) => total += f,
                None => return false,
            }
        }
        // A2: Kirchhoff at every bus.
        if (inj - total).abs() > TOL * (1.0 + total.abs()) {
            return false;
        }
        if mask[i] && inj.abs() > TOL {
            return false;
        }
    }
    !a.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::{connected_components, incident_edges};

    #[test]
    fn ring_examples() {
        let g = cycle(6);
        assert!(is_perfect_protection(&g, &VertexSet::from([1, 2, 4])).unwrap());
        assert!(is_rcds(&g, &VertexSet::from([1, 2, 4])).unwrap());
        assert!(!is_perfect_protection(&g, &VertexSet::from([1, 4])).unwrap());
        assert!(!is_rcds(&g, &VertexSet::from([1, 4])).unwrap());
        assert!(is_rcds(&g, &VertexSet::from([1, 2, 3, 4])).unwrap());
        let all: VertexSet = g.vertices().iter().copied().collect();
        assert!(is_perfect_protection(&g, &all).unwrap());
    }

    #[test]
    fn ring_split_matches_components_oracle() {
        // {1,4} dominates the ring but I_D(E) leaves {2,3}-side and {5,6}-side apart.
        let g = cycle(6);
        let d = VertexSet::from([1, 4]);
        let comps = connected_components(&g, &incident_edges(&g, &d).unwrap()).unwrap();
        assert_eq!(
            comps,
            vec![VertexSet::from([1, 2, 6]), VertexSet::from([3, 4, 5])]
        );
    }

    #[test]
    fn disconnected_graph_is_a_domain_error() {
        let g = Graph::from_edges([(1, 2), (3, 4)]).unwrap();
        assert!(is_perfect_protection(&g, &VertexSet::new()).is_err());
        assert!(construct_stealth_attack(&g, &VertexSet::new(), None).is_err());
    }

    #[test]
    fn degenerate_sizes() {
        let single = Graph::new([1], []).unwrap();
        assert!(is_perfect_protection(&single, &VertexSet::new()).unwrap());
        assert!(is_rcds(&single, &VertexSet::new()).unwrap());
        assert!(!is_rcds(&path(2), &VertexSet::new()).unwrap());
        assert!(!is_perfect_protection(&path(2), &VertexSet::new()).unwrap());
    }

    #[test]
    fn attack_on_unprotected_ring() {
        let g = cycle(6);
        let a = construct_stealth_attack(&g, &VertexSet::new(), None)
            .unwrap()
            .unwrap();
        let theta: Vec<f64> = a.phasors.values().copied().collect();
        assert_eq!(theta, vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let nonzero: Vec<((u32, u32), f64)> = a
            .flow
            .iter()
            .filter(|(_, &f)| f != 0.0)
            .map(|(&k, &f)| (k, f))
            .collect();
        assert_eq!(nonzero, vec![((1, 2), 1.0), ((1, 6), 1.0)]);
        assert_eq!(a.injection[&1], 2.0);
        assert_eq!(a.injection[&2], -1.0);
        assert_eq!(a.injection[&6], -1.0);
        assert_eq!(a.injection[&4], 0.0);
        assert!(verify_attack(&g, &VertexSet::new(), &a));
    }

    #[test]
    fn perfect_sets_admit_no_attack() {
        assert!(
            construct_stealth_attack(&cycle(6), &VertexSet::from([1, 2, 4]), None)
                .unwrap()
                .is_none()
        );
        assert!(
            construct_stealth_attack(&path(2), &VertexSet::from([1]), None)
                .unwrap()
                .is_none()
        );
    }

    #[test]
    fn custom_line_constants() {
        let g = path(3);
        let mut h = LineConstants::new();
        h.set(2, 1, 2.5);
        let a = construct_stealth_attack(&g, &VertexSet::new(), Some(&h))
            .unwrap()
            .unwrap();
        assert_eq!(a.flow[&(1, 2)], 2.5);
        assert!(verify_attack_with_constants(&g, &VertexSet::new(), &a, &h));
        assert!(!verify_attack_with_constants(
            &g,
            &VertexSet::new(),
            &a,
            &LineConstants::new()
        ));
        assert!(verify_attack(&g, &VertexSet::new(), &a));
    }

    #[test]
    fn rejects_invalid_attacks() {
        let g = cycle(6);
        let d = VertexSet::from([1, 2, 4]);
        let mut zero = Attack::default();
        for &v in g.vertices() {
            zero.phasors.insert(v, 0.0);
            zero.injection.insert(v, 0.0);
        }
        for e in g.edge_list() {
            zero.flow.insert(e, 0.0);
        }
        assert!(!verify_attack(&g, &d, &zero));

        // Flow on a line incident to a protected bus violates P1.
        let mut bad = zero.clone();
        bad.flow.insert((1, 2), 1.0);
        bad.phasors.insert(1, 1.0);
        bad.injection.insert(1, 1.0);
        bad.injection.insert(2, -1.0);
        assert!(!verify_attack(&g, &d, &bad));

        // Kirchhoff violation.
        let mut a = construct_stealth_attack(&g, &VertexSet::new(), None)
            .unwrap()
            .unwrap();
        a.injection.insert(3, 0.5);
        assert!(!verify_attack(&g, &VertexSet::new(), &a));
    }

    #[test]
    fn attack_json_uses_edge_keys() {
        let g = path(2);
        let a = construct_stealth_attack(&g, &VertexSet::new(), None)
            .unwrap()
            .unwrap();
        let text = a.to_json();
        assert_eq!(
            text,
            r#"{"phasors":{"1":1.0,"2":0.0},"flow":{"1-2":1.0},"injection":{"1":1.0,"2":-1.0}}"#
        );
        let back: Attack = serde_json::from_str(&text).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<Attack>(
            r#"{"phasors":{},"flow":{"2-1":1.0},"injection":{}}"#
        )
        .is_err());
    }
}
