//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so each criterion reports on its own
//! line even when an earlier one fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rcds_core::{
    best_heuristic_sphere_cut, bnb_min_rcds, brute_force_min_rcds, build_milp,
    construct_stealth_attack, heuristic_sphere_cut, heuristic_sphere_cut_with,
    import_decomposition, instances, is_perfect_protection, is_rcds, min_connected_dominating_set,
    min_dominating_set, planarity_embed, solve_decomposition, solve_planar_rcds, validate,
    verify_attack, Attack, DecompositionTree, Graph, MilpAssignment, PlaneEmbedding,
    ScDecomposition, Strategy, VertexId, VertexSet,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn subset(g: &Graph, mask: u64) -> VertexSet {
    (0..g.n())
        .filter(|&i| mask & (1 << i) != 0)
        .map(|i| g.id(i))
        .collect()
}

fn random_subset<R: Rng>(rng: &mut R, g: &Graph) -> VertexSet {
    let p = rng.gen_range(0.05..0.7);
    g.vertices()
        .iter()
        .copied()
        .filter(|_| rng.gen_bool(p))
        .collect()
}

fn small_graphs(max_n: u32) -> Vec<Graph> {
    (1..=max_n).flat_map(common::all_connected_graphs).collect()
}

fn random_planar_sample(seed: u64, count: usize, lo: u32, hi: u32) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(lo..=hi);
            let extra = rng.gen_range(0..=2 * n as usize);
            common::random_connected_planar(&mut rng, n, extra)
        })
        .collect()
}

fn table_values(names: &[&str], f: impl Fn(&Graph) -> usize) -> Vec<usize> {
    names
        .iter()
        .map(|n| f(&instances::load(n).unwrap()))
        .collect()
}

fn criterion_1() -> Outcome {
    let names = ["ieee9", "ieee14", "ieee24", "ieee30", "ieee39", "ieee57"];
    let start = Instant::now();
    let got = table_values(&names, |g| bnb_min_rcds(g).unwrap().cardinality);
    let secs = start.elapsed().as_secs_f64();
    let want = vec![3, 4, 8, 10, 15, 19];
    ensure(got == want, || format!("got {got:?}, expected {want:?}"))?;
    ensure(secs <= 300.0, || format!("took {secs:.1} s"))?;
    Ok(format!("bnb gives {got:?} on IEEE 9..57 in {secs:.2} s"))
}

fn criterion_2() -> Outcome {
    let names = ["ieee9", "ieee14", "ieee30", "ieee39", "ieee118"];
    let start = Instant::now();
    let got = table_values(&names, |g| {
        let r = solve_planar_rcds(g).unwrap();
        assert!(r.stats.optimal && r.stats.removed_edges.is_none());
        assert!(is_perfect_protection(g, &r.set).unwrap());
        r.cardinality
    });
    let secs = start.elapsed().as_secs_f64();
    let want = vec![3, 4, 10, 15, 34];
    ensure(got == want, || format!("got {got:?}, expected {want:?}"))?;
    let bnb = table_values(&names[..4], |g| bnb_min_rcds(g).unwrap().cardinality);
    ensure(bnb == got[..4], || {
        format!("bnb {bnb:?} differs from dp {:?}", &got[..4])
    })?;
    ensure(secs <= 1800.0, || format!("took {secs:.1} s"))?;
    Ok(format!(
        "dp gives {got:?} on planar IEEE 9, 14, 30, 39, 118 in {secs:.2} s"
    ))
}

fn criterion_3() -> Outcome {
    let names = ["ieee24", "ieee57", "ieee300"];
    let mut got = Vec::new();
    for n in names {
        let g = instances::load(n).unwrap();
        let r = solve_planar_rcds(&g).unwrap();
        ensure(r.stats.removed_edges.is_some_and(|k| k > 0), || {
            format!("{n} was not planarized")
        })?;
        ensure(is_perfect_protection(&g, &r.set).unwrap(), || {
            format!("{n}: set not perfect")
        })?;
        got.push(r.cardinality);
    }
    let floor = [8, 19, 93];
    ensure(got.iter().zip(floor).all(|(g, f)| *g >= f), || {
        format!("got {got:?}, expected at least {floor:?}")
    })?;
    Ok(format!("planarized dp gives {got:?}, bounds {floor:?}"))
}

fn criterion_4() -> Outcome {
    let names = ["ieee9", "ieee14", "ieee24", "ieee30", "ieee39"];
    let got = table_values(&names, |g| min_dominating_set(g).unwrap().cardinality);
    let want = vec![3, 4, 7, 10, 13];
    ensure(got == want, || format!("got {got:?}, expected {want:?}"))?;
    Ok(format!("dominating sets {got:?}"))
}

fn criterion_5() -> Outcome {
    let mut planar = 0;
    let mut nonplanar = 0;
    let mut check = |g: &Graph| -> Result<(), String> {
        let brute = brute_force_min_rcds(g, None).unwrap().cardinality;
        let bnb = bnb_min_rcds(g).unwrap().cardinality;
        let dp = solve_planar_rcds(g).unwrap();
        ensure(brute == bnb, || {
            format!("{:?}: brute {brute}, bnb {bnb}", g.edge_list())
        })?;
        ensure(is_perfect_protection(g, &dp.set).unwrap(), || {
            format!("{:?}: dp set not perfect", g.edge_list())
        })?;
        if dp.stats.removed_edges.is_some() {
            // The program runs on a planar subgraph here, so only the bound holds.
            nonplanar += 1;
            return ensure(dp.cardinality >= brute, || {
                format!("{:?}: dp below optimum", g.edge_list())
            });
        }
        planar += 1;
        ensure(bnb == dp.cardinality, || {
            format!(
                "{:?}: brute {brute}, bnb {bnb}, dp {}",
                g.edge_list(),
                dp.cardinality
            )
        })
    };
    for g in small_graphs(6) {
        check(&g)?;
    }
    for g in random_planar_sample(5, 500, 7, 9) {
        check(&g)?;
    }
    Ok(format!(
        "brute = bnb on {} graphs, = dp on all {planar} planar ones ({nonplanar} nonplanar bounded)",
        planar + nonplanar
    ))
}

fn criterion_6() -> Outcome {
    let mut pairs = 0u64;
    for g in small_graphs(6) {
        for mask in 0..(1u64 << g.n()) {
            let d = subset(&g, mask);
            let (a, b) = (
                is_perfect_protection(&g, &d).unwrap(),
                is_rcds(&g, &d).unwrap(),
            );
            ensure(a == b, || {
                format!("{:?} with {d}: perfect {a}, rcds {b}", g.edge_list())
            })?;
            pairs += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..10_000 {
        let n = rng.gen_range(7..=30);
        let p = rng.gen_range(0.0..0.3);
        let g = common::random_connected(&mut rng, n, p);
        let d = random_subset(&mut rng, &g);
        let (a, b) = (
            is_perfect_protection(&g, &d).unwrap(),
            is_rcds(&g, &d).unwrap(),
        );
        ensure(a == b, || {
            format!("{:?} with {d}: perfect {a}, rcds {b}", g.edge_list())
        })?;
        pairs += 1;
    }
    Ok(format!("{pairs} (graph, set) pairs agree"))
}

/// Checks an attack from first principles with unit line constants.
fn attack_holds(g: &Graph, d: &VertexSet, a: &Attack) -> bool {
    const TOL: f64 = 1e-9;
    let theta = |v: VertexId| a.phasors.get(&v).copied().unwrap_or(0.0);
    let mut nonzero = false;
    for (u, v) in g.edge_list() {
        let f = theta(u) - theta(v);
        let Some(&got) = a.flow.get(&(u.min(v), u.max(v))) else {
            return false;
        };
        let expect = if u < v { f } else { -f };
        if (got - expect).abs() > TOL {
            return false;
        }
        if (d.contains(u) || d.contains(v)) && got.abs() > TOL {
            return false;
        }
        nonzero |= got.abs() > TOL;
    }
    for &v in g.vertices() {
        let sum: f64 = g.neighbors(v).unwrap().map(|u| theta(v) - theta(u)).sum();
        let got = a.injection.get(&v).copied().unwrap_or(0.0);
        if (got - sum).abs() > TOL || (d.contains(v) && got.abs() > TOL) {
            return false;
        }
        nonzero |= got.abs() > TOL;
    }
    nonzero
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut attacks = 0;
    let mut perfect = 0;
    while attacks < 1000 {
        let n = rng.gen_range(2..=25);
        let p = rng.gen_range(0.0..0.3);
        let g = common::random_connected(&mut rng, n, p);
        let d = random_subset(&mut rng, &g);
        let attack = construct_stealth_attack(&g, &d, None).unwrap();
        if is_perfect_protection(&g, &d).unwrap() {
            ensure(attack.is_none(), || {
                format!("{:?} with perfect {d} got an attack", g.edge_list())
            })?;
            perfect += 1;
            continue;
        }
        let a = attack.ok_or_else(|| format!("{:?} with {d}: no attack", g.edge_list()))?;
        ensure(
            !a.is_zero() && verify_attack(&g, &d, &a) && attack_holds(&g, &d, &a),
            || {
                format!(
                    "{:?} with {d}: invalid attack {}",
                    g.edge_list(),
                    a.to_json()
                )
            },
        )?;
        attacks += 1;
    }
    for g in small_graphs(5) {
        for mask in 0..(1u64 << g.n()) {
            let d = subset(&g, mask);
            if is_perfect_protection(&g, &d).unwrap() {
                ensure(
                    construct_stealth_attack(&g, &d, None).unwrap().is_none(),
                    || format!("{:?} with perfect {d} got an attack", g.edge_list()),
                )?;
                perfect += 1;
            }
        }
    }
    Ok(format!(
        "{attacks} attacks verified, {perfect} perfect sets refused"
    ))
}

fn criterion_8() -> Outcome {
    let mut graphs: Vec<Graph> = small_graphs(6).into_iter().filter(|g| g.n() >= 2).collect();
    graphs.extend(random_planar_sample(8, 300, 7, 12));
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..200 {
        let n = rng.gen_range(7..=14);
        graphs.push(common::random_connected(&mut rng, n, 0.2));
    }
    for n in ["ieee9", "ieee14", "ieee24", "ieee30", "ieee39"] {
        graphs.push(instances::load(n).unwrap());
    }
    for g in &graphs {
        let ds = min_dominating_set(g).unwrap().cardinality;
        let rcds = bnb_min_rcds(g).unwrap().cardinality;
        let cds = min_connected_dominating_set(g).unwrap().cardinality;
        ensure(ds <= rcds && rcds <= cds, || {
            format!("{:?}: {ds} / {rcds} / {cds}", g.edge_list())
        })?;
    }
    Ok(format!("DS <= RCDS <= CDS on {} graphs", graphs.len()))
}

/// Evaluates every constraint of the flow model directly on the graph.
fn milp_holds(g: &Graph, source: VertexId, a: &MilpAssignment) -> bool {
    const TOL: f64 = 1e-9;
    let cap = (g.n() - 1) as f64;
    let y = |i: VertexId, j: VertexId| a.y.get(&(i, j)).copied().unwrap_or(f64::NAN);
    let x = |i: VertexId| a.x.get(&i).copied().map_or(f64::NAN, f64::from);
    for &v in g.vertices() {
        if !matches!(a.x.get(&v), Some(0 | 1)) {
            return false;
        }
        if v != source {
            let net: f64 = g.neighbors(v).unwrap().map(|u| y(v, u) - y(u, v)).sum();
            if (net + 1.0).abs() > TOL {
                return false;
            }
        }
    }
    g.edge_list().into_iter().all(|(i, j)| {
        y(i, j) >= -TOL && y(j, i) >= -TOL && y(i, j) + y(j, i) <= cap * (x(i) + x(j)) + TOL
    })
}

fn criterion_9() -> Outcome {
    let mut graphs: Vec<Graph> = small_graphs(5);
    graphs.extend(random_planar_sample(9, 200, 6, 30));
    for n in ["ieee9", "ieee14", "ieee24", "ieee30"] {
        graphs.push(instances::load(n).unwrap());
    }
    let mut checked = 0;
    for g in &graphs {
        let mut optima = vec![bnb_min_rcds(g).unwrap(), solve_planar_rcds(g).unwrap()];
        if g.n() <= 12 {
            optima.push(brute_force_min_rcds(g, None).unwrap());
        }
        let best = optima.iter().map(|r| r.cardinality).min().unwrap();
        for r in optima.iter().filter(|r| r.cardinality == best) {
            let model = build_milp(g, None).unwrap();
            let a = model.witness(g, &r.set).unwrap();
            ensure(
                model.check(&a).is_ok() && milp_holds(g, g.id(0), &a),
                || {
                    format!(
                        "{:?}: witness for {} violates the model",
                        g.edge_list(),
                        r.set
                    )
                },
            )?;
            ensure(a.objective() as usize == best, || {
                format!("objective {} != {best}", a.objective())
            })?;
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} optimal witnesses satisfy every constraint"
    ))
}

fn distinct(ds: Vec<ScDecomposition>) -> Vec<ScDecomposition> {
    let mut seen = BTreeSet::new();
    ds.into_iter()
        .filter(|d| seen.insert(d.to_text()))
        .collect()
}

/// Another valid decomposition obtained by exchanging two subtrees across
/// an internal tree edge.
fn swapped(emb: &PlaneEmbedding, d: &ScDecomposition) -> Option<ScDecomposition> {
    let tree = d.to_tree();
    let degree = |id: u32| {
        tree.nodes
            .iter()
            .find(|n| n.id == id)
            .map_or(0, |n| n.neighbors.len())
    };
    let leaves: Vec<_> = tree
        .nodes
        .iter()
        .filter_map(|n| n.leaf_edge.map(|e| (n.id, e)))
        .collect();
    let edges = tree.tree_edges();
    let nbrs = |id: u32| {
        tree.nodes
            .iter()
            .find(|n| n.id == id)
            .unwrap()
            .neighbors
            .clone()
    };
    for &(a, b) in &edges {
        if degree(a) != 3 || degree(b) != 3 {
            continue;
        }
        for x in nbrs(a).into_iter().filter(|&x| x != b) {
            for y in nbrs(b).into_iter().filter(|&y| y != a) {
                let key = |p: u32, q: u32| (p.min(q), p.max(q));
                let mut next: Vec<(u32, u32)> = edges
                    .iter()
                    .copied()
                    .filter(|&e| e != key(a, x) && e != key(b, y))
                    .collect();
                next.push(key(a, y));
                next.push(key(b, x));
                let candidate = DecompositionTree::from_parts(&next, &leaves, Default::default());
                if validate(emb, &candidate).valid {
                    return import_decomposition(emb, &candidate).ok();
                }
            }
        }
    }
    None
}

fn criterion_10() -> Outcome {
    let mut graphs: Vec<(String, Graph)> = ["ieee9", "ieee14", "ieee30", "ieee39", "ieee118"]
        .iter()
        .map(|n| (n.to_string(), instances::load(n).unwrap()))
        .collect();
    for (k, g) in random_planar_sample(10, 200, 5, 25).into_iter().enumerate() {
        graphs.push((format!("random #{k}"), g));
    }
    let mut compared = 0;
    for (name, g) in &graphs {
        if g.m() < 3 {
            continue;
        }
        let emb = planarity_embed(g).unwrap();
        let d = heuristic_sphere_cut(&emb).unwrap();
        ensure(validate(&emb, &d.to_tree()).valid, || {
            format!("{name}: default decomposition invalid")
        })?;
        let mut all: Vec<ScDecomposition> = Strategy::ALL
            .iter()
            .map(|&s| heuristic_sphere_cut_with(&emb, s).unwrap())
            .collect();
        all.push(best_heuristic_sphere_cut(&emb).unwrap());
        let mut all = distinct(all);
        if all.len() < 2 {
            all.extend(swapped(&emb, &all[0]));
            all = distinct(all);
        }
        for d in &all {
            ensure(validate(&emb, &d.to_tree()).valid, || {
                format!("{name}: decomposition invalid")
            })?;
        }
        let values: BTreeSet<usize> = all
            .iter()
            .map(|d| solve_decomposition(d).unwrap().cardinality)
            .collect();
        ensure(values.len() == 1, || {
            format!("{name}: values differ {values:?}")
        })?;
        if all.len() >= 2 {
            compared += 1;
        }
    }
    ensure(compared == graphs.len(), || {
        format!(
            "only {compared} of {} graphs had two distinct decompositions",
            graphs.len()
        )
    })?;
    Ok(format!(
        "{} graphs validated, dp value stable across distinct decompositions",
        graphs.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("IEEE exact values by branch and bound", criterion_1),
        ("IEEE planar values by dynamic programming", criterion_2),
        ("planarized upper bounds", criterion_3),
        ("dominating set baseline", criterion_4),
        ("brute force = bnb = dp", criterion_5),
        ("perfect protection = RCDS", criterion_6),
        ("stealth attack soundness", criterion_7),
        ("DS <= RCDS <= CDS", criterion_8),
        ("MILP witness", criterion_9),
        ("decomposition validity and independence", criterion_10),
    ];
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!(
                "PASS criterion {:>2}: {title}: {detail} [{secs:.1}s]",
                i + 1
            ),
            Err(detail) => {
                failed += 1;
                println!(
                    "FAIL criterion {:>2}: {title}: {detail} [{secs:.1}s]",
                    i + 1
                );
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
