use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rcds_core::{
    bench_suite, best_heuristic_sphere_cut, bnb_min_rcds, brute_force_min_rcds, build_milp,
    construct_stealth_attack, export_lp, import_decomposition_str, instances, is_perfect_protection,
    is_rcds, parse_edge_list, planarity_embed, render_table, solve_planar_rcds, BenchOptions,
    Graph, VertexId, VertexSet,
};

#[derive(Parser)]
#[command(name = "rcds", version, about = "Perfect protection placement for power networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find a minimum perfect protection set.
    Solve {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_enum, default_value_t = SolveMethod::Dp)]
        method: SolveMethod,
        /// Write the result as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Check whether a set of buses is a perfect protection.
    Verify {
        #[command(flatten)]
        graph: GraphArgs,
        /// Protected buses, e.g. "1,2,6".
        #[arg(long)]
        set: String,
    },
    /// Print a stealth attack against a set of buses, or "none".
    Attack {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        set: String,
    },
    /// Build a sphere-cut decomposition of a planar graph.
    Decompose {
        #[command(flatten)]
        graph: GraphArgs,
        /// Validate this decomposition (JSON or line format) instead of building one.
        #[arg(long)]
        check: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the flow MILP in LP format.
    ExportMilp {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        out: PathBuf,
        /// Flow source vertex (defaults to the smallest id).
        #[arg(long)]
        source: Option<VertexId>,
    },
    /// Run the benchmark suite on the bundled instances.
    Bench {
        #[arg(long, default_value = "ieee")]
        suite: String,
        /// Comma-separated subset of instance names.
        #[arg(long)]
        only: Option<String>,
        #[arg(long)]
        json: Option<PathBuf>,
        /// Exit nonzero when a record disagrees with the reference values.
        #[arg(long)]
        strict: bool,
        /// Run the exact solvers on every instance, however large.
        #[arg(long)]
        exact_all: bool,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct GraphArgs {
    /// Edge-list or graph JSON file.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Bundled instance name, e.g. ieee14.
    #[arg(long)]
    instance: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolveMethod {
    Dp,
    Bnb,
    Brute,
}

/// Failure that maps to exit code 2.
#[derive(Debug)]
struct InputError(String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn input_error(msg: impl Into<String>) -> anyhow::Error {
    InputError(msg.into()).into()
}

impl GraphArgs {
    fn load(&self) -> anyhow::Result<Graph> {
        if let Some(name) = &self.instance {
            return Ok(instances::load(name)?);
        }
        let path = self.input.as_deref().expect("clap requires one source");
        let text = read(path)?;
        let g = if text.trim_start().starts_with('{') {
            Graph::from_json(&text)?
        } else {
            parse_edge_list(&text)?
        };
        Ok(g)
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn parse_set(text: &str) -> anyhow::Result<VertexSet> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<VertexId>()
                .map_err(|_| input_error(format!("{s:?} is not a vertex id")))
        })
        .collect()
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Solve {
            graph,
            method,
            json,
        } => {
            let g = graph.load()?;
            let r = match method {
                SolveMethod::Dp => solve_planar_rcds(&g)?,
                SolveMethod::Bnb => bnb_min_rcds(&g)?,
                SolveMethod::Brute => brute_force_min_rcds(&g, None)?,
            };
            println!("method: {}", r.method);
            println!("cardinality: {}", r.cardinality);
            println!("set: {}", r.set);
            println!("optimal: {}", r.stats.optimal);
            if let Some(w) = r.stats.width {
                println!("width: {w}");
            }
            if let Some(k) = r.stats.removed_edges {
                println!("removed edges: {k}");
            }
            if let Some(note) = &r.stats.note {
                println!("note: {note}");
            }
            println!("seconds: {:.6}", r.stats.seconds);
            if let Some(path) = json {
                write(&path, &r.to_json())?;
            }
        }
        Command::Verify { graph, set } => {
            let g = graph.load()?;
            let d = parse_set(&set)?;
            let perfect = is_perfect_protection(&g, &d)?;
            let rcds = is_rcds(&g, &d)?;
            println!("{}", if perfect { "perfect" } else { "not perfect" });
            println!("rcds: {rcds}");
            println!(
                "characterizations {}",
                if perfect == rcds { "agree" } else { "disagree" }
            );
            if perfect != rcds {
                bail!("protection and rcds tests disagree on {d}");
            }
        }
        Command::Attack { graph, set } => {
            let g = graph.load()?;
            let d = parse_set(&set)?;
            match construct_stealth_attack(&g, &d, None)? {
                Some(a) => println!("{}", a.to_json()),
                None => println!("none"),
            }
        }
        Command::Decompose { graph, check, out } => {
            let g = graph.load()?;
            let emb = planarity_embed(&g)?;
            let d = match check {
                Some(path) => import_decomposition_str(&emb, &read(&path)?)?,
                None => best_heuristic_sphere_cut(&emb)?,
            };
            let json = d.to_json();
            match out {
                Some(path) => {
                    write(&path, &json)?;
                    println!("valid decomposition of width {}", d.width());
                }
                None => println!("{json}"),
            }
        }
        Command::ExportMilp { graph, out, source } => {
            let g = graph.load()?;
            let m = build_milp(&g, source)?;
            write(&out, &export_lp(&m))?;
            println!(
                "{} binaries, {} flow variables",
                m.num_binaries(),
                m.num_flows()
            );
        }
        Command::Bench {
            suite,
            only,
            json,
            strict,
            exact_all,
        } => {
            if suite != "ieee" {
                return Err(input_error(format!("unknown suite {suite:?}; available: ieee")));
            }
            let names: Vec<String> = match only {
                Some(list) => list
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(String::from)
                    .collect(),
                None => instances::names().into_iter().map(String::from).collect(),
            };
            let names: Vec<&str> = names.iter().map(String::as_str).collect();
            let records = bench_suite(&names, BenchOptions { exact_all })?;
            print!("{}", render_table(&records));
            if let Some(path) = json {
                write(&path, &serde_json::to_string_pretty(&records)?)?;
            }
            let bad: Vec<&str> = records
                .iter()
                .filter(|r| !r.ok())
                .map(|r| r.instance.as_str())
                .collect();
            if strict && !bad.is_empty() {
                return Err(anyhow!("reference mismatch on {}", bad.join(", ")));
            }
        }
    }
    Ok(())
}

fn classify(err: &anyhow::Error) -> (&'static str, u8) {
    if let Some(e) = err.downcast_ref::<rcds_core::Error>() {
        let code = if e.is_input_error() { 2 } else { 1 };
        return (e.kind(), code);
    }
    if err.downcast_ref::<InputError>().is_some() {
        return ("input", 2);
    }
    ("internal", 1)
}

fn report(kind: &str, message: &str, code: u8) -> ExitCode {
    let body = serde_json::json!({ "error": { "kind": kind, "message": message } });
    eprintln!("{body}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => return report("usage", e.to_string().trim(), 2),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (kind, code) = classify(&e);
            report(kind, &format!("{e:#}"), code)
        }
    }
}
