//! The `poplab` command line.
//!
//! Exit codes: 0 success (solved, verified), 1 unsolved or a failed check,
//! 2 bad usage or unreadable input, 3 node ceiling hit.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use poplab_core::correspondence::{
    build_linearization_map, enumerate_tree, verify_disjointness, verify_disjointness_unrelated, verify_pair,
    verify_totality, SearchTree, DEFAULT_NODE_CEILING,
};
use poplab_core::domains::{serialize_problem, suite, FIXTURE_NAMES};
use poplab_core::oracle::minimal_length;
use poplab_core::search::{search, Heuristic, PlanSpace, Strategy, StrategyConfig, DEFAULT_MAX_ITERATIONS};
use poplab_core::{GoalSelection, Planner, PlannerConfig, PlannerKind, Problem};

use crate::dump::{self, step_names};
use crate::experiment::{self, ExperimentConfig, Format};
use crate::source::{self, SourceError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CEILING: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "poplab", version, about = "Plan-space planners and search-tree experiments")]
pub struct Cli {
    /// Per-run node ceiling for searches and tree enumeration.
    #[arg(long, global = true, env = "POPLAB_NODE_CEILING")]
    pub node_ceiling: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum OutFormat {
    Text,
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve one problem.
    Solve {
        /// Problem file, or fixture:<name>, d1s1:<i,j,..>, bw:<blocks>:<seed>.
        problem: String,
        #[arg(long, default_value = "ua", value_parser = parse_planner)]
        planner: PlannerKind,
        #[arg(long, default_value = "dfs", value_parser = parse_strategy)]
        strategy: Strategy,
        #[arg(long, default_value = "none", value_parser = parse_heuristic)]
        heuristic: Heuristic,
        /// `auto` uses the minimal solution length.
        #[arg(long, default_value = "auto")]
        depth_limit: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: OutFormat,
    },
    /// Enumerate both trees to a depth and check their correspondence.
    Verify {
        problem: String,
        /// ua, uac or mt; compared against to or toc.
        #[arg(long, default_value = "ua", value_parser = parse_planner)]
        planner: PlannerKind,
        #[arg(long, default_value = "auto")]
        depth_limit: String,
        /// Compare MT against TO by linearization and report overlaps as
        /// findings rather than failures.
        #[arg(long)]
        mt: bool,
    },
    /// Run an experiment matrix from a config file.
    Experiment {
        config: PathBuf,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<OutFormat>,
        /// Also write per-class means to this file (CSV).
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Write the 44-problem suite as problem files, one directory per class.
    Gen { out_dir: PathBuf },
    /// Dump an enumerated tree (and optionally its map into the TO tree) as JSON.
    DumpTree {
        problem: String,
        #[arg(long, default_value = "ua", value_parser = parse_planner)]
        planner: PlannerKind,
        #[arg(long, default_value = "auto")]
        depth_limit: String,
        /// Emit `{tree, to_tree, map}` instead of the bare tree.
        #[arg(long)]
        with_map: bool,
    },
    /// Print a built-in fixture as a problem file, or list them.
    Fixture { name: Option<String> },
}

fn parse_planner(s: &str) -> Result<PlannerKind, String> {
    PlannerKind::parse(s).ok_or_else(|| format!("unknown planner `{s}` (to, ua, toc, uac, mt)"))
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    Strategy::parse(s).ok_or_else(|| format!("unknown strategy `{s}` (bfs, dfs, isamp, ibroad)"))
}

fn parse_heuristic(s: &str) -> Result<Heuristic, String> {
    Heuristic::parse(s)
        .ok_or_else(|| format!("unknown heuristic `{s}` (none, min-goals-rank, min-goals-prune, min-goals-prob)"))
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Source(#[from] SourceError),
    #[error(transparent)]
    Config(#[from] experiment::ConfigError),
    #[error("bad depth limit `{0}`; expected `auto` or an integer")]
    DepthLimit(String),
    #[error("{0} has no solution; pass --depth-limit explicitly")]
    NoSolution(String),
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] poplab_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(poplab_core::Error::NodeCeiling { .. })
            | CliError::Source(SourceError::Core(poplab_core::Error::NodeCeiling { .. })) => EXIT_CEILING,
            CliError::NoSolution(_) => EXIT_FAILED,
            _ => EXIT_USAGE,
        }
    }
}

fn depth_limit(spec: &str, problem: &Problem) -> Result<usize, CliError> {
    if spec == "auto" {
        minimal_length(problem)?.ok_or_else(|| CliError::NoSolution(problem.name().into()))
    } else {
        spec.parse().map_err(|_| CliError::DepthLimit(spec.into()))
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Write { path: dir.into(), source })?;
    }
    std::fs::write(path, bytes).map_err(|source| CliError::Write { path: path.into(), source })
}

fn io(e: std::io::Error) -> CliError {
    CliError::Write { path: "<stdout>".into(), source: e }
}

/// Parses `args` and runs the command. Diagnostics go to `err`.
pub fn run_from<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match run(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let ceiling = cli.node_ceiling;
    match &cli.command {
        Command::Solve { problem, planner, strategy, heuristic, depth_limit: dl, seed, format } => {
            let pb = source::load(problem)?;
            let depth = depth_limit(dl, &pb)?;
            let planner = Planner::new(&pb, PlannerConfig::new(*planner).with_goal_selection(GoalSelection::Seeded(*seed)));
            let mut sc = StrategyConfig::new(*strategy, depth).with_seed(*seed).with_heuristic(*heuristic);
            sc.node_ceiling = ceiling;
            sc.max_iterations = DEFAULT_MAX_ITERATIONS;
            let o = search(&PlanSpace { planner: &planner }, &sc)?;
            let steps = o.solution.as_ref().map(|c| step_names(&pb, &c.plan));
            match format {
                OutFormat::Json => {
                    let v = serde_json::json!({
                        "problem": pb.name(),
                        "solved": o.solved,
                        "depth_limit": depth,
                        "nodes_expanded": o.nodes_expanded,
                        "leaves_visited": o.leaves_visited,
                        "iterations": o.iterations,
                        "operator_sequence": steps,
                        "edges": o.solution.as_ref().map(|c| c.plan.edges().map(|(a, b)| [a, b]).collect::<Vec<_>>()),
                    });
                    writeln!(out, "{}", serde_json::to_string_pretty(&v)?).map_err(io)?;
                }
                OutFormat::Text | OutFormat::Csv => {
                    let mut s = String::new();
                    let _ = writeln!(
                        s,
                        "{}: {} (depth limit {depth}, {} nodes, {} leaves, {} iterations)",
                        pb.name(),
                        if o.solved { "solved" } else { "no solution found" },
                        o.nodes_expanded,
                        o.leaves_visited,
                        o.iterations
                    );
                    if let (Some(c), Some(names)) = (&o.solution, &steps) {
                        let (order, _) = c.plan.topological_order();
                        let seq: Vec<&str> = order.iter().map(|&l| names[l].as_str()).collect();
                        let _ = writeln!(s, "steps: {}", seq.join(" "));
                        let reduced: Vec<String> = c
                            .plan
                            .edges()
                            .filter(|&(a, b)| a != 0 && b != 1)
                            .map(|(a, b)| format!("{}<{}", names[a], names[b]))
                            .collect();
                        let _ = writeln!(
                            s,
                            "orderings: {}",
                            if reduced.is_empty() { "none".to_string() } else { reduced.join(" ") }
                        );
                    }
                    out.write_all(s.as_bytes()).map_err(io)?;
                }
            }
            Ok(if o.solved { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Verify { problem, planner, depth_limit: dl, mt } => {
            let pb = source::load(problem)?;
            let depth = depth_limit(dl, &pb)?;
            let ceiling = ceiling.unwrap_or(DEFAULT_NODE_CEILING);
            let kind = if *mt { PlannerKind::Mt } else { *planner };
            if kind.total_order_counterpart() == kind {
                return Err(CliError::Usage(format!("`{}` is already a total-order planner", kind.name())));
            }
            let src = enumerate_tree(&Planner::new(&pb, PlannerConfig::new(kind)), depth, ceiling)?;
            let to_kind = kind.total_order_counterpart();
            let to = enumerate_tree(&Planner::new(&pb, PlannerConfig::new(to_kind)), depth, ceiling)?;
            let mut s = String::new();
            let _ = writeln!(s, "{} at depth {depth}: |{}| = {}, |{}| = {}", pb.name(), kind.name(), src.len(), to_kind.name(), to.len());
            let code = if kind == PlannerKind::Mt {
                verify_mt(&src, &to, &mut s)?
            } else {
                let (_, v) = verify_pair(&pb, &src, &to)?;
                let _ = writeln!(s, "image total {}", v.image_total);
                for r in &v.reports {
                    let _ = writeln!(s, "{:<14} {} ({} checked, {} violations)", r.check, pass(r.passed()), r.checked, r.violations.len());
                }
                if v.passed() { EXIT_OK } else { EXIT_FAILED }
            };
            out.write_all(s.as_bytes()).map_err(io)?;
            Ok(code)
        }
        Command::Experiment { config, trials, output, format, summary } => {
            let mut cfg = ExperimentConfig::load(config)?;
            if let Some(t) = trials {
                cfg.trials = *t;
            }
            if output.is_some() {
                cfg.output.clone_from(output);
            }
            match format {
                Some(OutFormat::Json) => cfg.format = Format::Json,
                Some(OutFormat::Csv) => cfg.format = Format::Csv,
                Some(OutFormat::Text) => return Err(CliError::Usage("experiment output is csv or json".into())),
                None => {}
            }
            if ceiling.is_some() {
                cfg.node_ceiling = ceiling;
            }
            let problems = experiment::resolve_problems(&cfg.problems)?;
            let rows = experiment::run(&cfg, &problems);
            let mut bytes = Vec::new();
            match cfg.format {
                Format::Csv => experiment::write_csv(&rows, &mut bytes)?,
                Format::Json => {
                    serde_json::to_writer_pretty(&mut bytes, &rows)?;
                    bytes.push(b'\n');
                }
            }
            let sum = experiment::summarize(&rows);
            match &cfg.output {
                Some(p) => {
                    write_file(p, &bytes)?;
                    out.write_all(experiment::summary_table(&sum).as_bytes()).map_err(io)?;
                }
                None => {
                    out.write_all(&bytes).map_err(io)?;
                    let _ = err.write_all(experiment::summary_table(&sum).as_bytes());
                }
            }
            if let Some(p) = summary {
                let mut b = Vec::new();
                experiment::write_summary_csv(&sum, &mut b)?;
                write_file(p, &b)?;
            }
            let errors = rows.iter().filter(|r| !r.error.is_empty()).count();
            if errors > 0 {
                let _ = writeln!(err, "{errors} of {} runs reported errors", rows.len());
            }
            Ok(EXIT_OK)
        }
        Command::Gen { out_dir } => {
            let entries = suite::suite();
            for e in &entries {
                let path = out_dir.join(format!("len{}", e.length_class)).join(format!("{}.problem", e.id));
                write_file(&path, serialize_problem(&e.problem()?).as_bytes())?;
            }
            writeln!(out, "wrote {} problems to {}", entries.len(), out_dir.display()).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::DumpTree { problem, planner, depth_limit: dl, with_map } => {
            let pb = source::load(problem)?;
            let depth = depth_limit(dl, &pb)?;
            let ceiling = ceiling.unwrap_or(DEFAULT_NODE_CEILING);
            let tree = enumerate_tree(&Planner::new(&pb, PlannerConfig::new(*planner)), depth, ceiling)?;
            let text = if *with_map {
                let to_kind = planner.total_order_counterpart();
                let to = enumerate_tree(&Planner::new(&pb, PlannerConfig::new(to_kind)), depth, ceiling)?;
                let map = if *planner == PlannerKind::Mt || to_kind == *planner {
                    build_linearization_map(&tree, &to)?
                } else {
                    poplab_core::correspondence::build_L(&tree, &to)?
                };
                serde_json::to_string_pretty(&serde_json::json!({
                    "tree": dump::tree_records(&pb, &tree),
                    "to_tree": dump::tree_records(&pb, &to),
                    "map": dump::map_records(&map),
                }))?
            } else {
                dump::tree_json(&pb, &tree)?
            };
            writeln!(out, "{text}").map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Fixture { name } => {
            match name {
                Some(n) => out.write_all(serialize_problem(&source::load(&format!("fixture:{n}"))?).as_bytes()).map_err(io)?,
                None => {
                    for n in FIXTURE_NAMES {
                        writeln!(out, "{n}").map_err(io)?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
    }
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAILED"
    }
}

/// MT nodes can share linearizations, so overlaps are reported as a finding.
fn verify_mt(mt: &SearchTree, to: &SearchTree, s: &mut String) -> Result<i32, CliError> {
    let map = build_linearization_map(mt, to)?;
    let total = verify_totality(&map);
    let disj = verify_disjointness(&map);
    let unrelated = verify_disjointness_unrelated(&map, mt);
    let _ = writeln!(s, "{:<14} {} ({} checked, {} violations)", total.check, pass(total.passed()), total.checked, total.violations.len());
    let _ = writeln!(
        s,
        "disjointness   {} TO nodes are linearizations of more than one MT node (redundant MT search)",
        disj.violations.len()
    );
    let _ = writeln!(s, "  among MT nodes not on one branch: {}", unrelated.violations.len());
    if let Some(&t) = disj.violations.first() {
        let owners: Vec<usize> = map.pairs().filter(|&(_, tt)| tt == t).map(|(u, _)| u).collect();
        let _ = writeln!(s, "  e.g. TO node {t} linearizes MT nodes {owners:?}");
    }
    Ok(if total.passed() { EXIT_OK } else { EXIT_FAILED })
}
