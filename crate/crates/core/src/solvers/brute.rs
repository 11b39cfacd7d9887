use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::protection::rcds_mask;

use super::{Method, SolveResult, SolveStats, Timer};

/// Largest graph enumerated without an explicit cardinality bound.
pub const BRUTE_FORCE_LIMIT: usize = 20;

/// Enumerates subsets by increasing size, lexicographically within a size,
/// and returns the first relaxed connected dominating set.
///
/// With `max_card` the search stops after that size and reports
/// [`Error::Infeasible`]; without it graphs above [`BRUTE_FORCE_LIMIT`]
/// vertices are refused.
pub fn brute_force_min_rcds(g: &Graph, max_card: Option<usize>) -> Result<SolveResult> {
    g.require_connected()?;
    let n = g.n();
    if max_card.is_none() && n > BRUTE_FORCE_LIMIT {
        return Err(Error::SizeGuard {
            size: n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let timer = Timer::start();
    let top = max_card.unwrap_or(n).min(n);
    let mut enumerated = 0u64;
    let mut mask = vec![false; n];
    for k in 0..=top {
        let mut comb: Vec<usize> = (0..k).collect();
        loop {
            enumerated += 1;
            mask.iter_mut().for_each(|b| *b = false);
            for &i in &comb {
                mask[i] = true;
            }
            if rcds_mask(g, &mask) {
                let stats = SolveStats {
                    nodes: enumerated,
                    seconds: timer.seconds(),
                    optimal: true,
                    ..SolveStats::default()
                };
                return Ok(SolveResult::new(
                    g.set_from_mask(&mask),
                    Method::Brute,
                    stats,
                ));
            }
            if !next_combination(&mut comb, n) {
                break;
            }
        }
    }
    Err(Error::Infeasible)
}

/// Advances `comb` to the next k-subset of `0..n` in lexicographic order.
fn next_combination(comb: &mut [usize], n: usize) -> bool {
    let k = comb.len();
    let Some(i) = (0..k).rev().find(|&i| comb[i] < n - k + i) else {
        return false;
    };
    comb[i] += 1;
    for j in i + 1..k {
        comb[j] = comb[j - 1] + 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::VertexSet;

    #[test]
    fn combinations_in_order() {
        let mut c = vec![0, 1];
        let mut seen = vec![c.clone()];
        while next_combination(&mut c, 4) {
            seen.push(c.clone());
        }
        assert_eq!(
            seen,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        let mut empty: Vec<usize> = vec![];
        assert!(!next_combination(&mut empty, 3));
    }

    #[test]
    fn small_instances() {
        let r = brute_force_min_rcds(&cycle(6), None).unwrap();
        assert_eq!(r.cardinality, 3);
        assert_eq!(r.set, VertexSet::from([1, 2, 4]));
        assert_eq!(
            brute_force_min_rcds(&path(2), None).unwrap().set,
            VertexSet::from([1])
        );
        assert_eq!(
            brute_force_min_rcds(&star(5), None).unwrap().set,
            VertexSet::from([1])
        );
        assert_eq!(
            brute_force_min_rcds(&Graph::new([7], []).unwrap(), None)
                .unwrap()
                .cardinality,
            0
        );
    }

    #[test]
    fn bounds_and_guards() {
        assert!(matches!(
            brute_force_min_rcds(&cycle(6), Some(2)),
            Err(Error::Infeasible)
        ));
        assert_eq!(
            brute_force_min_rcds(&cycle(6), Some(3))
                .unwrap()
                .cardinality,
            3
        );
        assert!(matches!(
            brute_force_min_rcds(&path(21), None),
            Err(Error::SizeGuard {
                size: 21,
                limit: 20
            })
        ));
        let disconnected = Graph::from_edges([(1, 2), (3, 4)]).unwrap();
        assert!(matches!(
            brute_force_min_rcds(&disconnected, None),
            Err(Error::Disconnected)
        ));
    }
}
