//! Benchmark harness over the bundled IEEE instances.

use serde::{Deserialize, Serialize};

use crate::dp::solve_decomposition;
use crate::error::Result;
use crate::instances::{self, Reference};
use crate::planar::planarize;
use crate::protection::is_perfect_protection;
use crate::scd::best_heuristic_sphere_cut;
use crate::solvers::{bnb_min_rcds, min_dominating_set, Timer};

/// Largest instance solved exactly unless [`BenchOptions::exact_all`] is set.
pub const EXACT_LIMIT: usize = 57;

#[derive(Clone, Copy, Debug, Default)]
pub struct BenchOptions {
    /// Also run the exact solvers above [`EXACT_LIMIT`] vertices.
    pub exact_all: bool,
}

/// One row of the benchmark report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub instance: String,
    pub vertices: usize,
    pub edges: usize,
    pub planar: bool,
    pub removed_edges: usize,
    pub width: usize,
    /// Dynamic program on the (planarized) graph.
    pub rcds_scd: usize,
    /// Exact minimum by branch and bound.
    pub rcds: Option<usize>,
    pub dominating: Option<usize>,
    pub t_scd: f64,
    pub t_dp: f64,
    pub t_solve: Option<f64>,
    /// Disagreements with the reference values.
    pub issues: Vec<String>,
}

impl BenchRecord {
    pub fn ok(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Runs the pipeline on each named bundled instance.
pub fn bench_suite(names: &[&str], opts: BenchOptions) -> Result<Vec<BenchRecord>> {
    names.iter().map(|n| bench_instance(n, opts)).collect()
}

fn bench_instance(name: &str, opts: BenchOptions) -> Result<BenchRecord> {
    let g = instances::load(name)?;
    let timer = Timer::start();
    let p = planarize(&g)?;
    let d = best_heuristic_sphere_cut(&p.embedding)?;
    let t_scd = timer.seconds();
    let dp = solve_decomposition(&d)?;
    let exact = opts.exact_all || g.n() <= EXACT_LIMIT;
    let (rcds, t_solve, dominating) = if exact {
        let timer = Timer::start();
        let r = bnb_min_rcds(&g)?;
        let t = timer.seconds();
        (Some(r.cardinality), Some(t), Some(min_dominating_set(&g)?.cardinality))
    } else {
        (None, None, None)
    };
    let mut rec = BenchRecord {
        instance: name.to_string(),
        vertices: g.n(),
        edges: g.m(),
        planar: p.removed_edges.is_empty(),
        removed_edges: p.removed_edges.len(),
        width: d.width(),
        rcds_scd: dp.cardinality,
        rcds,
        dominating,
        t_scd,
        t_dp: dp.stats.seconds,
        t_solve,
        issues: Vec::new(),
    };
    if !is_perfect_protection(&g, &dp.set)? {
        rec.issues.push("dynamic program returned a set that is not perfect".into());
    }
    if let Some(r) = instances::reference(name) {
        rec.issues.extend(compare(&rec, r));
    }
    Ok(rec)
}

/// Lists disagreements between a record and its reference row.
pub fn compare(rec: &BenchRecord, r: &Reference) -> Vec<String> {
    let mut out = Vec::new();
    let mut expect = |what: &str, got: usize, want: usize| {
        if got != want {
            out.push(format!("{what} = {got}, expected {want}"));
        }
    };
    expect("|V|", rec.vertices, r.vertices);
    expect("|E|", rec.edges, r.edges);
    expect("planar", usize::from(rec.planar), usize::from(r.planar));
    if let Some(x) = rec.rcds {
        expect("|D*|", x, r.rcds);
    }
    if let Some(x) = rec.dominating {
        expect("|DS|", x, r.dominating);
    }
    if r.planar {
        expect("|D*_SCD|", rec.rcds_scd, r.rcds_planarized);
    } else if rec.rcds_scd < r.rcds {
        out.push(format!("|D*_SCD| = {} is below the optimum {}", rec.rcds_scd, r.rcds));
    }
    let ordered = rec.dominating.zip(rec.rcds).map_or(true, |(ds, d)| ds <= d)
        && rec.rcds.map_or(true, |d| d <= rec.rcds_scd);
    if !ordered {
        out.push("expected |DS| <= |D*| <= |D*_SCD|".into());
    }
    out
}

/// Aligned text table of the records.
pub fn render_table(records: &[BenchRecord]) -> String {
    let header = [
        "instance", "|V|", "|E|", "planar", "removed", "width", "|D*_SCD|", "|D*|", "|DS|", "T_SCD",
        "T_DP", "T_solve", "status",
    ];
    let opt = |x: Option<usize>| x.map_or("-".to_string(), |v| v.to_string());
    let secs = |x: f64| format!("{x:.4}");
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| {
            vec![
                r.instance.clone(),
                r.vertices.to_string(),
                r.edges.to_string(),
                if r.planar { "yes" } else { "no" }.to_string(),
                r.removed_edges.to_string(),
                r.width.to_string(),
                r.rcds_scd.to_string(),
                opt(r.rcds),
                opt(r.dominating),
                secs(r.t_scd),
                secs(r.t_dp),
                r.t_solve.map_or("-".to_string(), secs),
                if r.ok() { "ok".to_string() } else { r.issues.join("; ") },
            ]
        })
        .collect();
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: Vec<String>| {
        let last = cells.len() - 1;
        let mut s = String::new();
        for (i, (c, w)) in cells.iter().zip(&widths).enumerate() {
            if i == 0 || i == last {
                s.push_str(&format!("{c:<w$}"));
            } else {
                s.push_str(&format!("{c:>w$}"));
            }
            if i < last {
                s.push_str("  ");
            }
        }
        s.trim_end().to_string()
    };
    let mut out = line(header.iter().map(|h| h.to_string()).collect());
    out.push('\n');
    for row in rows {
        out.push_str(&line(row));
        out.push('\n');
    }
    out
}
