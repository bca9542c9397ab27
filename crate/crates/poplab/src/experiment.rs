//! The planner × strategy × heuristic × trial experiment matrix.
//!
//! Config files are flat `key = value` lines (`#` comments):
//!
//! ```text
//! problems    = suite            # suite, suite:<class>, a spec, a file, a dir, or a glob
//! planners    = to,ua
//! strategies  = dfs
//! heuristics  = none,min-goals-rank
//! trials      = 25
//! base_seed   = 0
//! depth_limit = auto             # auto (oracle minimal length) or an integer
//! output      = results.csv      # optional
//! format      = csv              # csv or json
//! node_ceiling = 1000000         # optional, per run
//! max_iterations = 100000        # iterative sampling probe limit
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use poplab_core::domains::suite;
use poplab_core::oracle::{shortest_solution, DEFAULT_STATE_CEILING};
use poplab_core::search::{search, Heuristic, PlanSpace, Strategy, StrategyConfig, DEFAULT_MAX_ITERATIONS};
use poplab_core::{GoalSelection, Planner, PlannerConfig, PlannerKind, Problem};
use rayon::prelude::*;
use serde::Serialize;

use crate::source::{self, SourceError};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: bad value `{value}` for `{key}`")]
    BadValue { line: usize, key: String, value: String },
    #[error("no problems match `{0}`")]
    NoProblems(String),
    #[error(transparent)]
    Source(#[from] SourceError),
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DepthLimit {
    /// The minimal solution length found by the state-space oracle.
    Auto,
    Fixed(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub problems: String,
    pub planners: Vec<PlannerKind>,
    pub strategies: Vec<Strategy>,
    pub heuristics: Vec<Heuristic>,
    pub trials: usize,
    pub base_seed: u64,
    pub depth_limit: DepthLimit,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub node_ceiling: Option<usize>,
    pub max_iterations: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            problems: "suite".into(),
            planners: vec![PlannerKind::To, PlannerKind::Ua],
            strategies: vec![Strategy::Dfs],
            heuristics: vec![Heuristic::None],
            trials: 25,
            base_seed: 0,
            depth_limit: DepthLimit::Auto,
            output: None,
            format: Format::Csv,
            node_ceiling: None,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }
}

fn list<T>(line: usize, key: &str, value: &str, parse: impl Fn(&str) -> Option<T>) -> Result<Vec<T>, ConfigError> {
    value
        .split(',')
        .map(|s| {
            parse(s.trim()).ok_or_else(|| ConfigError::BadValue { line, key: key.into(), value: s.trim().into() })
        })
        .collect()
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = ExperimentConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let code = raw.split('#').next().unwrap_or("").trim();
            if code.is_empty() {
                continue;
            }
            let (key, value) = code.split_once('=').ok_or(ConfigError::Syntax { line })?;
            let (key, value) = (key.trim(), value.trim());
            let bad = || ConfigError::BadValue { line, key: key.into(), value: value.into() };
            match key {
                "problems" => cfg.problems = value.into(),
                "planners" => cfg.planners = list(line, key, value, PlannerKind::parse)?,
                "strategies" => cfg.strategies = list(line, key, value, Strategy::parse)?,
                "heuristics" => cfg.heuristics = list(line, key, value, Heuristic::parse)?,
                "trials" => cfg.trials = value.parse().map_err(|_| bad())?,
                "base_seed" => cfg.base_seed = value.parse().map_err(|_| bad())?,
                "depth_limit" => {
                    cfg.depth_limit = if value == "auto" {
                        DepthLimit::Auto
                    } else {
                        DepthLimit::Fixed(value.parse().map_err(|_| bad())?)
                    }
                }
                "output" => cfg.output = Some(value.into()),
                "format" => {
                    cfg.format = match value {
                        "csv" => Format::Csv,
                        "json" => Format::Json,
                        _ => return Err(bad()),
                    }
                }
                "node_ceiling" => cfg.node_ceiling = Some(value.parse().map_err(|_| bad())?),
                "max_iterations" => cfg.max_iterations = value.parse().map_err(|_| bad())?,
                _ => return Err(ConfigError::UnknownKey { line, key: key.into() }),
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.into(), source })?;
        Self::parse(&text)
    }
}

/// A problem with the label the CSV reports it under.
#[derive(Clone, Debug)]
pub struct SuiteProblem {
    pub id: String,
    /// Minimal solution length class, when known.
    pub length_class: Option<usize>,
    pub problem: Problem,
}

fn class_from_dir(path: &Path) -> Option<usize> {
    let dir = path.parent()?.file_name()?.to_str()?;
    dir.strip_prefix("len")?.parse().ok()
}

fn files_under(dir: &Path, out: &mut Vec<PathBuf>) -> Result<(), ConfigError> {
    let rd = std::fs::read_dir(dir).map_err(|source| ConfigError::Io { path: dir.into(), source })?;
    for entry in rd {
        let p = entry.map_err(|source| ConfigError::Io { path: dir.into(), source })?.path();
        if p.is_dir() {
            files_under(&p, out)?;
        } else if p.extension().is_some_and(|e| e == "problem") {
            out.push(p);
        }
    }
    Ok(())
}

/// Resolves the `problems` setting. Files in a `len<k>` directory get
/// length class `k`.
pub fn resolve_problems(spec: &str) -> Result<Vec<SuiteProblem>, ConfigError> {
    if spec == "suite" || spec.starts_with("suite:") {
        let only: Option<usize> = match spec.strip_prefix("suite:") {
            Some(c) => Some(c.parse().map_err(|_| ConfigError::NoProblems(spec.into()))?),
            None => None,
        };
        let entries: Vec<_> = suite::suite().into_iter().filter(|e| only.is_none_or(|c| e.length_class == c)).collect();
        if entries.is_empty() {
            return Err(ConfigError::NoProblems(spec.into()));
        }
        return entries
            .into_iter()
            .map(|e| {
                Ok(SuiteProblem {
                    id: e.id.clone(),
                    length_class: Some(e.length_class),
                    problem: e.problem().map_err(SourceError::from)?,
                })
            })
            .collect();
    }
    let path = Path::new(spec);
    let mut files = Vec::new();
    if spec.contains('*') || spec.contains('?') || spec.contains('[') {
        for entry in glob::glob(spec).map_err(|_| ConfigError::NoProblems(spec.into()))? {
            files.push(entry.map_err(|e| ConfigError::Io { path: e.path().into(), source: e.into() })?);
        }
    } else if path.is_dir() {
        files_under(path, &mut files)?;
    } else if path.exists() {
        files.push(path.into());
    } else {
        let problem = source::load(spec)?;
        return Ok(vec![SuiteProblem { id: problem.name().into(), length_class: None, problem }]);
    }
    files.sort();
    if files.is_empty() {
        return Err(ConfigError::NoProblems(spec.into()));
    }
    files
        .into_iter()
        .map(|f| {
            let problem = source::load_file(&f)?;
            Ok(SuiteProblem { id: problem.name().into(), length_class: class_from_dir(&f), problem })
        })
        .collect()
}

/// One CSV row. Everything before `wall_ms` is reproducible from the
/// config and seed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub problem_id: String,
    pub length_class: String,
    pub planner: &'static str,
    pub strategy: &'static str,
    pub heuristic: &'static str,
    pub seed: u64,
    pub trial: usize,
    pub solved: bool,
    pub depth_limit: usize,
    pub nodes_expanded: usize,
    pub leaves_visited: usize,
    pub solution_length: String,
    pub iterations: usize,
    pub error: String,
    pub wall_ms: f64,
}

pub const CSV_HEADER: [&str; 15] = [
    "problem_id",
    "length_class",
    "planner",
    "strategy",
    "heuristic",
    "seed",
    "trial",
    "solved",
    "depth_limit",
    "nodes_expanded",
    "leaves_visited",
    "solution_length",
    "iterations",
    "error",
    "wall_ms",
];

struct Cell<'a> {
    problem: &'a SuiteProblem,
    depth_limit: Result<usize, String>,
    planner: PlannerKind,
    strategy: Strategy,
    heuristic: Heuristic,
    trial: usize,
}

fn run_cell(cell: &Cell<'_>, cfg: &ExperimentConfig) -> Row {
    let seed = cfg.base_seed.wrapping_add(cell.trial as u64);
    let mut row = Row {
        problem_id: cell.problem.id.clone(),
        length_class: cell.problem.length_class.map_or_else(|| "-".into(), |c| c.to_string()),
        planner: cell.planner.name(),
        strategy: cell.strategy.name(),
        heuristic: cell.heuristic.name(),
        seed,
        trial: cell.trial,
        solved: false,
        depth_limit: 0,
        nodes_expanded: 0,
        leaves_visited: 0,
        solution_length: String::new(),
        iterations: 0,
        error: String::new(),
        wall_ms: 0.0,
    };
    let depth = match &cell.depth_limit {
        Ok(d) => *d,
        Err(e) => {
            row.error = e.clone();
            return row;
        }
    };
    row.depth_limit = depth;
    // Goal selection is seeded by the trial, identically for every planner.
    let planner = Planner::new(
        &cell.problem.problem,
        PlannerConfig::new(cell.planner).with_goal_selection(GoalSelection::Seeded(seed)),
    );
    let space = PlanSpace { planner: &planner };
    let mut sc = StrategyConfig::new(cell.strategy, depth).with_seed(seed).with_heuristic(cell.heuristic);
    sc.node_ceiling = cfg.node_ceiling;
    sc.max_iterations = cfg.max_iterations;
    let start = Instant::now();
    let outcome = search(&space, &sc);
    row.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    match outcome {
        Ok(o) => {
            row.solved = o.solved;
            row.nodes_expanded = o.nodes_expanded;
            row.leaves_visited = o.leaves_visited;
            row.iterations = o.iterations;
            if let Some(sol) = &o.solution {
                row.solution_length = sol.plan.length().to_string();
            }
            if o.exhausted {
                row.error = "iteration limit".into();
            }
        }
        Err(e) => row.error = e.to_string(),
    }
    row
}

/// Runs every cell of the matrix. Rows come back sorted by problem,
/// planner, strategy, heuristic and trial regardless of scheduling.
pub fn run(cfg: &ExperimentConfig, problems: &[SuiteProblem]) -> Vec<Row> {
    let limits: Vec<Result<usize, String>> = problems
        .par_iter()
        .map(|p| match cfg.depth_limit {
            DepthLimit::Fixed(d) => Ok(d),
            DepthLimit::Auto => match shortest_solution(&p.problem, DEFAULT_STATE_CEILING) {
                Ok(Some(s)) => Ok(s.length),
                Ok(None) => Err("no solution exists".to_string()),
                Err(e) => Err(e.to_string()),
            },
        })
        .collect();
    // Problems without a known class are classed by their oracle length.
    let classed: Vec<SuiteProblem> = problems
        .iter()
        .zip(&limits)
        .map(|(p, limit)| match (p.length_class, cfg.depth_limit, limit) {
            (None, DepthLimit::Auto, Ok(d)) => SuiteProblem { length_class: Some(*d), ..p.clone() },
            _ => p.clone(),
        })
        .collect();
    let mut cells = Vec::new();
    for (p, limit) in classed.iter().zip(&limits) {
        for &planner in &cfg.planners {
            for &strategy in &cfg.strategies {
                for &heuristic in &cfg.heuristics {
                    for trial in 0..cfg.trials {
                        cells.push(Cell { problem: p, depth_limit: limit.clone(), planner, strategy, heuristic, trial });
                    }
                }
            }
        }
    }
    let mut rows: Vec<Row> = cells.par_iter().map(|c| run_cell(c, cfg)).collect();
    rows.sort_by(|a, b| {
        (&a.problem_id, a.planner, a.strategy, a.heuristic, a.trial).cmp(&(&b.problem_id, b.planner, b.strategy, b.heuristic, b.trial))
    });
    rows
}

pub fn write_csv<W: std::io::Write>(rows: &[Row], w: W) -> csv::Result<()> {
    let mut wr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    wr.write_record(CSV_HEADER)?;
    for r in rows {
        wr.serialize(r)?;
    }
    wr.flush()?;
    Ok(())
}

/// Means per (length class, planner, strategy, heuristic).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummaryRow {
    pub length_class: String,
    pub planner: &'static str,
    pub strategy: &'static str,
    pub heuristic: &'static str,
    pub runs: usize,
    pub solved: usize,
    pub errors: usize,
    pub mean_nodes: f64,
    pub mean_leaves: f64,
    pub mean_iterations: f64,
    /// `1 - mean_nodes / mean_nodes(heuristic = none)` for the same class,
    /// planner and strategy; empty for the baseline itself.
    pub relative_improvement: Option<f64>,
}

fn class_key(c: &str) -> (usize, String) {
    (c.parse().unwrap_or(usize::MAX), c.to_string())
}

pub fn summarize(rows: &[Row]) -> Vec<SummaryRow> {
    type Key = ((usize, String), &'static str, &'static str, &'static str);
    let mut groups: BTreeMap<Key, Vec<&Row>> = BTreeMap::new();
    for r in rows {
        groups.entry((class_key(&r.length_class), r.planner, r.strategy, r.heuristic)).or_default().push(r);
    }
    let mean = |rs: &[&Row], f: fn(&Row) -> usize| rs.iter().map(|r| f(r) as f64).sum::<f64>() / rs.len() as f64;
    let mut out: Vec<SummaryRow> = groups
        .iter()
        .map(|((class, planner, strategy, heuristic), rs)| SummaryRow {
            length_class: class.1.clone(),
            planner,
            strategy,
            heuristic,
            runs: rs.len(),
            solved: rs.iter().filter(|r| r.solved).count(),
            errors: rs.iter().filter(|r| !r.error.is_empty()).count(),
            mean_nodes: mean(rs, |r| r.nodes_expanded),
            mean_leaves: mean(rs, |r| r.leaves_visited),
            mean_iterations: mean(rs, |r| r.iterations),
            relative_improvement: None,
        })
        .collect();
    let baselines: Vec<(String, &str, &str, f64)> = out
        .iter()
        .filter(|s| s.heuristic == Heuristic::None.name())
        .map(|s| (s.length_class.clone(), s.planner, s.strategy, s.mean_nodes))
        .collect();
    for s in out.iter_mut().filter(|s| s.heuristic != Heuristic::None.name()) {
        if let Some(b) = baselines.iter().find(|b| b.0 == s.length_class && b.1 == s.planner && b.2 == s.strategy) {
            if b.3 > 0.0 {
                s.relative_improvement = Some(1.0 - s.mean_nodes / b.3);
            }
        }
    }
    out
}

pub fn summary_mean(summary: &[SummaryRow], class: usize, planner: PlannerKind, strategy: Strategy, heuristic: Heuristic) -> Option<&SummaryRow> {
    let class = class.to_string();
    summary
        .iter()
        .find(|s| s.length_class == class && s.planner == planner.name() && s.strategy == strategy.name() && s.heuristic == heuristic.name())
}

pub fn write_summary_csv<W: std::io::Write>(summary: &[SummaryRow], w: W) -> csv::Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for s in summary {
        wr.serialize(s)?;
    }
    wr.flush()?;
    Ok(())
}

/// Fixed-width table of the summary for terminals.
pub fn summary_table(summary: &[SummaryRow]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:>6} {:>7} {:>8} {:>15} {:>5} {:>6} {:>12} {:>12} {:>10} {:>8}",
        "class", "planner", "strategy", "heuristic", "runs", "solved", "mean_nodes", "mean_leaves", "mean_iters", "improv"
    );
    for r in summary {
        let imp = r.relative_improvement.map_or_else(|| "-".to_string(), |x| format!("{:.1}%", 100.0 * x));
        let _ = writeln!(
            s,
            "{:>6} {:>7} {:>8} {:>15} {:>5} {:>6} {:>12.1} {:>12.1} {:>10.1} {:>8}",
            r.length_class, r.planner, r.strategy, r.heuristic, r.runs, r.solved, r.mean_nodes, r.mean_leaves, r.mean_iterations, imp
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_config() {
        let cfg = ExperimentConfig::parse(
            "# comment\nproblems = fixture:sussman\nplanners = to, ua,mt\nstrategies=dfs,isamp\nheuristics = none,min-goals-rank\n\
             trials = 3\nbase_seed = 7\ndepth_limit = 4\nformat = json\nnode_ceiling = 100\n",
        )
        .unwrap();
        assert_eq!(cfg.planners, [PlannerKind::To, PlannerKind::Ua, PlannerKind::Mt]);
        assert_eq!(cfg.strategies, [Strategy::Dfs, Strategy::IterativeSampling]);
        assert_eq!(cfg.heuristics, [Heuristic::None, Heuristic::MinGoalsRank]);
        assert_eq!((cfg.trials, cfg.base_seed, cfg.depth_limit), (3, 7, DepthLimit::Fixed(4)));
        assert_eq!((cfg.format, cfg.node_ceiling), (Format::Json, Some(100)));
    }

    #[test]
    fn config_errors_name_the_line() {
        assert!(matches!(ExperimentConfig::parse("trials 3"), Err(ConfigError::Syntax { line: 1 })));
        assert!(matches!(ExperimentConfig::parse("\nplanners = to,xx"), Err(ConfigError::BadValue { line: 2, .. })));
        assert!(matches!(ExperimentConfig::parse("colour = red"), Err(ConfigError::UnknownKey { .. })));
    }

    fn small() -> ExperimentConfig {
        ExperimentConfig {
            problems: "fixture:sussman".into(),
            strategies: vec![Strategy::Dfs, Strategy::IterativeSampling],
            heuristics: vec![Heuristic::None, Heuristic::MinGoalsRank],
            trials: 3,
            ..Default::default()
        }
    }

    #[test]
    fn rows_are_canonical_and_reproducible() {
        let cfg = small();
        let problems = resolve_problems(&cfg.problems).unwrap();
        let a = run(&cfg, &problems);
        assert_eq!(a.len(), 2 * 2 * 2 * 3);
        assert!(a.iter().all(|r| r.solved && r.depth_limit == 3 && r.length_class == "3"));
        let b = run(&cfg, &problems);
        let strip = |rs: &[Row]| rs.iter().map(|r| Row { wall_ms: 0.0, ..r.clone() }).collect::<Vec<_>>();
        assert_eq!(strip(&a), strip(&b));
        let mut buf = Vec::new();
        write_csv(&a, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(&CSV_HEADER.join(",")));
        assert_eq!(text.lines().count(), 1 + a.len());
    }

    #[test]
    fn summary_has_relative_improvement() {
        let cfg = small();
        let rows = run(&cfg, &resolve_problems(&cfg.problems).unwrap());
        let s = summarize(&rows);
        assert_eq!(s.len(), 2 * 2 * 2);
        for r in &s {
            assert_eq!(r.relative_improvement.is_some(), r.heuristic != "none", "{r:?}");
        }
        assert!(summary_table(&s).contains("improv"));
    }

    #[test]
    fn failures_become_rows() {
        let cfg = ExperimentConfig { problems: "fixture:unsolvable".into(), trials: 2, ..Default::default() };
        let rows = run(&cfg, &resolve_problems(&cfg.problems).unwrap());
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| !r.solved && r.error == "no solution exists"));
        let cfg = ExperimentConfig { node_ceiling: Some(2), depth_limit: DepthLimit::Fixed(3), trials: 1, ..small() };
        let rows = run(&cfg, &resolve_problems(&cfg.problems).unwrap());
        assert!(rows.iter().any(|r| r.error.contains("node ceiling")));
    }
}
