//! Search strategies over any tree of plans: breadth-first, depth-limited
//! depth-first, iterative sampling and iterative broadening, each with an
//! optional min-goals heuristic.
//!
//! A node counts as explored when it is generated and goal-tested; a leaf
//! is an explored node that is a solution, a dead end or at the depth
//! limit. Depth-first search and iterative broadening shuffle the children
//! of a node with a generator seeded from the run seed and the node's key,
//! so a broadening pass whose cutoff reaches the full branching factor
//! visits exactly the nodes plain depth-first search visits.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::time::Duration;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::plan::{mix64, Plan};
use crate::planners::{Child, Planner};
use crate::truth::Semantics;

/// A tree the strategies can walk.
pub trait SearchSpace {
    type Node: Clone;

    fn root(&self) -> Result<Self::Node>;
    fn is_solution(&self, node: &Self::Node) -> bool;
    /// Min-goals rating: the number of open goals.
    fn rating(&self, node: &Self::Node) -> usize;
    fn expand(&self, node: &Self::Node) -> Result<Vec<Self::Node>>;
    /// Stable identity used to seed per-node shuffles.
    fn key(&self, node: &Self::Node) -> u64;
}

/// The tree a planner generates, rooted at the initial plan.
pub struct PlanSpace<'p, 'a> {
    pub planner: &'p Planner<'a>,
}

impl SearchSpace for PlanSpace<'_, '_> {
    type Node = Child;

    fn root(&self) -> Result<Child> {
        Ok(self.planner.root())
    }

    fn is_solution(&self, node: &Child) -> bool {
        node.goals.is_empty()
    }

    fn rating(&self, node: &Child) -> usize {
        node.goals.len()
    }

    fn expand(&self, node: &Child) -> Result<Vec<Child>> {
        Ok(self.planner.expand(&node.plan, &node.goals)?.children)
    }

    fn key(&self, node: &Child) -> u64 {
        node.plan.id()
    }
}

/// Min-goals rating of a plan under the given goal semantics.
pub fn min_goals_rating(plan: &Plan, semantics: Semantics) -> Result<usize> {
    Ok(crate::truth::goal_set(plan, semantics)?.entries.len())
}

/// An explicit tree given by child lists, for schematic and synthetic
/// experiments. Node 0 is the root.
#[derive(Clone, Debug, Default)]
pub struct ExplicitTree {
    pub children: Vec<Vec<usize>>,
    pub solution: Vec<bool>,
    pub rating: Vec<usize>,
}

impl ExplicitTree {
    /// A root with `n` leaf children, the ones listed in `solutions` being
    /// solutions.
    pub fn flat(n: usize, solutions: &[usize]) -> Self {
        let mut t = ExplicitTree {
            children: alloc::vec![(1..=n).collect()],
            solution: alloc::vec![false],
            rating: alloc::vec![1],
        };
        for i in 0..n {
            t.children.push(Vec::new());
            let s = solutions.contains(&i);
            t.solution.push(s);
            t.rating.push(usize::from(!s));
        }
        t
    }

    /// A complete tree with the given branching per level; leaves (in
    /// left-to-right order) listed in `solutions` are solutions.
    pub fn complete(branching: &[usize], solutions: &[usize]) -> Self {
        let mut t = ExplicitTree { children: alloc::vec![Vec::new()], solution: alloc::vec![false], rating: alloc::vec![1] };
        let mut level = alloc::vec![0usize];
        for &b in branching {
            let mut next = Vec::new();
            for &n in &level {
                for _ in 0..b {
                    let id = t.children.len();
                    t.children.push(Vec::new());
                    t.solution.push(false);
                    t.rating.push(1);
                    t.children[n].push(id);
                    next.push(id);
                }
            }
            level = next;
        }
        for &s in solutions {
            t.solution[level[s]] = true;
            t.rating[level[s]] = 0;
        }
        t
    }
}

impl SearchSpace for ExplicitTree {
    type Node = usize;

    fn root(&self) -> Result<usize> {
        Ok(0)
    }

    fn is_solution(&self, n: &usize) -> bool {
        self.solution[*n]
    }

    fn rating(&self, n: &usize) -> usize {
        self.rating[*n]
    }

    fn expand(&self, n: &usize) -> Result<Vec<usize>> {
        Ok(self.children[*n].clone())
    }

    fn key(&self, n: &usize) -> u64 {
        *n as u64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    Bfs,
    Dfs,
    IterativeSampling,
    IterativeBroadening,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [Strategy::Bfs, Strategy::Dfs, Strategy::IterativeSampling, Strategy::IterativeBroadening];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Bfs => "bfs",
            Strategy::Dfs => "dfs",
            Strategy::IterativeSampling => "isamp",
            Strategy::IterativeBroadening => "ibroad",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Strategy::ALL.into_iter().find(|k| k.name() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Heuristic {
    None,
    /// Shuffle, then stable-sort ascending by rating.
    MinGoalsRank,
    /// Keep only the children with the fewest goals.
    MinGoalsPrune,
    /// Order children by weighted sampling with weight `1 / (1 + rating)`.
    MinGoalsProbabilistic,
}

impl Heuristic {
    pub const ALL: [Heuristic; 4] =
        [Heuristic::None, Heuristic::MinGoalsRank, Heuristic::MinGoalsPrune, Heuristic::MinGoalsProbabilistic];

    pub fn name(self) -> &'static str {
        match self {
            Heuristic::None => "none",
            Heuristic::MinGoalsRank => "min-goals-rank",
            Heuristic::MinGoalsPrune => "min-goals-prune",
            Heuristic::MinGoalsProbabilistic => "min-goals-prob",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Heuristic::ALL.into_iter().find(|k| k.name() == s)
    }
}

pub const DEFAULT_MAX_ITERATIONS: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StrategyConfig {
    pub strategy: Strategy,
    pub depth_limit: usize,
    /// Iterative sampling gives up after this many probes.
    pub max_iterations: usize,
    pub heuristic: Heuristic,
    pub seed: u64,
    pub trials: usize,
    /// Explored-node limit; exceeding it is an error.
    pub node_ceiling: Option<usize>,
}

impl StrategyConfig {
    pub fn new(strategy: Strategy, depth_limit: usize) -> Self {
        StrategyConfig {
            strategy,
            depth_limit,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            heuristic: Heuristic::None,
            seed: 0,
            trials: 1,
            node_ceiling: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_heuristic(mut self, h: Heuristic) -> Self {
        self.heuristic = h;
        self
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome<N> {
    pub solved: bool,
    pub solution: Option<N>,
    /// Nodes generated and goal-tested, the root included.
    pub nodes_expanded: usize,
    pub leaves_visited: usize,
    /// Explored nodes per depth.
    pub per_level_counts: Vec<usize>,
    /// Probes for iterative sampling, passes for iterative broadening, 1
    /// otherwise.
    pub iterations: usize,
    /// Iterative sampling ran out of probes.
    pub exhausted: bool,
    pub solution_depth: Option<usize>,
    /// Filled in by callers that can read a clock.
    pub wall_time: Option<Duration>,
    pub seed: u64,
}

impl<N> SearchOutcome<N> {
    fn new(seed: u64) -> Self {
        SearchOutcome {
            solved: false,
            solution: None,
            nodes_expanded: 0,
            leaves_visited: 0,
            per_level_counts: Vec::new(),
            iterations: 0,
            exhausted: false,
            solution_depth: None,
            wall_time: None,
            seed,
        }
    }

    fn visit(&mut self, depth: usize, ceiling: Option<usize>) -> Result<()> {
        self.nodes_expanded += 1;
        if self.per_level_counts.len() <= depth {
            self.per_level_counts.resize(depth + 1, 0);
        }
        self.per_level_counts[depth] += 1;
        match ceiling {
            Some(c) if self.nodes_expanded > c => Err(Error::NodeCeiling { ceiling: c, count: self.nodes_expanded }),
            _ => Ok(()),
        }
    }

    fn found(&mut self, node: N, depth: usize) {
        self.solved = true;
        self.solution = Some(node);
        self.solution_depth = Some(depth);
    }
}

pub fn search<S: SearchSpace>(space: &S, cfg: &StrategyConfig) -> Result<SearchOutcome<S::Node>> {
    match cfg.strategy {
        Strategy::Bfs => bfs(space, cfg),
        Strategy::Dfs => dfs(space, cfg),
        Strategy::IterativeSampling => iterative_sampling(space, cfg),
        Strategy::IterativeBroadening => iterative_broadening(space, cfg),
    }
}

/// One outcome per trial, trial `i` using seed `cfg.seed + i`.
pub fn run_trials<S: SearchSpace>(space: &S, cfg: &StrategyConfig) -> Result<Vec<SearchOutcome<S::Node>>> {
    (0..cfg.trials.max(1))
        .map(|i| search(space, &StrategyConfig { seed: cfg.seed.wrapping_add(i as u64), ..*cfg }))
        .collect()
}

/// Level-by-level search, goal-testing nodes as they are generated and
/// stopping at the first solution.
pub fn bfs<S: SearchSpace>(space: &S, cfg: &StrategyConfig) -> Result<SearchOutcome<S::Node>> {
    let mut out = SearchOutcome::new(cfg.seed);
    out.iterations = 1;
    let root = space.root()?;
    out.visit(0, cfg.node_ceiling)?;
    if space.is_solution(&root) {
        out.leaves_visited = 1;
        out.found(root, 0);
        return Ok(out);
    }
    let mut frontier = alloc::vec![root];
    for depth in 0..cfg.depth_limit {
        let mut next = Vec::new();
        for node in &frontier {
            let children = space.expand(node)?;
            if children.is_empty() {
                out.leaves_visited += 1;
            }
            for c in children {
                out.visit(depth + 1, cfg.node_ceiling)?;
                if space.is_solution(&c) {
                    out.leaves_visited += 1;
                    out.found(c, depth + 1);
                    return Ok(out);
                }
                next.push(c);
            }
        }
        frontier = next;
    }
    out.leaves_visited += frontier.len();
    Ok(out)
}

fn node_rng(seed: u64, key: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix64(seed ^ mix64(key)))
}

fn weighted_pick<R: Rng>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().sum();
    let mut x = rng.gen::<f64>() * total;
    for (i, w) in weights.iter().enumerate() {
        if x < *w {
            return i;
        }
        x -= w;
    }
    weights.len() - 1
}

/// Shuffles children and applies the heuristic.
pub fn arrange<S: SearchSpace, R: Rng>(space: &S, mut children: Vec<S::Node>, h: Heuristic, rng: &mut R) -> Vec<S::Node> {
    children.shuffle(rng);
    match h {
        Heuristic::None => children,
        Heuristic::MinGoalsRank => {
            children.sort_by_key(|c| space.rating(c));
            children
        }
        Heuristic::MinGoalsPrune => {
            let best = children.iter().map(|c| space.rating(c)).min();
            children.retain(|c| Some(space.rating(c)) == best);
            children
        }
        Heuristic::MinGoalsProbabilistic => {
            let mut weights: Vec<f64> = children.iter().map(|c| 1.0 / (1.0 + space.rating(c) as f64)).collect();
            let mut out = Vec::with_capacity(children.len());
            while !children.is_empty() {
                let i = weighted_pick(&weights, rng);
                weights.swap_remove(i);
                out.push(children.swap_remove(i));
            }
            out
        }
    }
}

struct Dfs<'s, S: SearchSpace> {
    space: &'s S,
    cfg: &'s StrategyConfig,
    breadth: usize,
    truncated: bool,
}

impl<S: SearchSpace> Dfs<'_, S> {
    fn go(&mut self, node: S::Node, depth: usize, out: &mut SearchOutcome<S::Node>) -> Result<bool> {
        out.visit(depth, self.cfg.node_ceiling)?;
        if self.space.is_solution(&node) {
            out.leaves_visited += 1;
            out.found(node, depth);
            return Ok(true);
        }
        if depth >= self.cfg.depth_limit {
            out.leaves_visited += 1;
            return Ok(false);
        }
        let children = self.space.expand(&node)?;
        if children.is_empty() {
            out.leaves_visited += 1;
            return Ok(false);
        }
        let mut rng = node_rng(self.cfg.seed, self.space.key(&node));
        let mut ordered = arrange(self.space, children, self.cfg.heuristic, &mut rng);
        if ordered.len() > self.breadth {
            self.truncated = true;
            ordered.truncate(self.breadth);
        }
        for c in ordered {
            if self.go(c, depth + 1, out)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Depth-limited depth-first search with seeded child shuffles.
pub fn dfs<S: SearchSpace>(space: &S, cfg: &StrategyConfig) -> Result<SearchOutcome<S::Node>> {
    let mut out = SearchOutcome::new(cfg.seed);
    out.iterations = 1;
    let mut d = Dfs { space, cfg, breadth: usize::MAX, truncated: false };
    d.go(space.root()?, 0, &mut out)?;
    Ok(out)
}

/// Depth-first passes visiting at most `b` children per node for
/// `b = 1, 2, ...`, until a solution is found or a pass cuts nothing off.
/// Counters accumulate over passes.
pub fn iterative_broadening<S: SearchSpace>(space: &S, cfg: &StrategyConfig) -> Result<SearchOutcome<S::Node>> {
    let mut out = SearchOutcome::new(cfg.seed);
    let root = space.root()?;
    for b in 1.. {
        out.iterations = b;
        let mut d = Dfs { space, cfg, breadth: b, truncated: false };
        if d.go(root.clone(), 0, &mut out)? || !d.truncated {
            break;
        }
    }
    Ok(out)
}

/// Iterative sampling's expansion cache is emptied when it reaches this
/// many nodes.
pub const SAMPLING_CACHE_LIMIT: usize = 200_000;

/// Repeated random root-to-leaf probes with no memory between them.
/// Expansions are cached by node key, which changes running time only.
pub fn iterative_sampling<S: SearchSpace>(space: &S, cfg: &StrategyConfig) -> Result<SearchOutcome<S::Node>> {
    let mut out = SearchOutcome::new(cfg.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let root = space.root()?;
    let mut cache: BTreeMap<u64, Vec<S::Node>> = BTreeMap::new();
    while out.iterations < cfg.max_iterations {
        out.iterations += 1;
        let mut node = root.clone();
        let mut depth = 0;
        loop {
            out.visit(depth, cfg.node_ceiling)?;
            if space.is_solution(&node) {
                out.leaves_visited += 1;
                out.found(node, depth);
                return Ok(out);
            }
            if depth >= cfg.depth_limit {
                out.leaves_visited += 1;
                break;
            }
            let key = space.key(&node);
            if !cache.contains_key(&key) {
                let fresh = space.expand(&node)?;
                if cache.len() >= SAMPLING_CACHE_LIMIT {
                    cache.clear();
                }
                cache.insert(key, fresh);
            }
            let children = &cache[&key];
            if children.is_empty() {
                out.leaves_visited += 1;
                break;
            }
            let i = match cfg.heuristic {
                Heuristic::None => rng.gen_range(0..children.len()),
                Heuristic::MinGoalsRank | Heuristic::MinGoalsPrune => {
                    let best = children.iter().map(|c| space.rating(c)).min().unwrap();
                    let idx: Vec<usize> = (0..children.len()).filter(|&i| space.rating(&children[i]) == best).collect();
                    idx[rng.gen_range(0..idx.len())]
                }
                Heuristic::MinGoalsProbabilistic => {
                    let w: Vec<f64> = children.iter().map(|c| 1.0 / (1.0 + space.rating(c) as f64)).collect();
                    weighted_pick(&w, &mut rng)
                }
            };
            node = children[i].clone();
            depth += 1;
        }
    }
    out.exhausted = true;
    Ok(out)
}

/// Mean number of leaves tested before the first solution when `n` leaves
/// containing `k` solutions are tested in uniformly random order without
/// repetition: `runs` depth-first searches over a flat tree. Its exact
/// value is `(n + 1) / (k + 1)`: about `n / 2` for one solution and about
/// `n / k` when `k` is large.
pub fn leaf_sampling_estimate(n: usize, k: usize, runs: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut leaves: Vec<usize> = (0..n).collect();
    let mut total = 0usize;
    for r in 0..runs {
        leaves.shuffle(&mut rng);
        let tree = ExplicitTree::flat(n, &leaves[..k]);
        let out = dfs(&tree, &StrategyConfig::new(Strategy::Dfs, 1).with_seed(seed ^ r as u64))?;
        total += out.leaves_visited;
    }
    Ok(total as f64 / runs as f64)
}

/// Mean probes of iterative sampling on the same flat tree (sampling with
/// replacement); its exact value is `n / k`.
pub fn iterative_sampling_estimate(n: usize, k: usize, runs: usize, seed: u64) -> Result<f64> {
    let tree = ExplicitTree::flat(n, &(0..k).collect::<Vec<_>>());
    let mut total = 0usize;
    for r in 0..runs {
        let out = iterative_sampling(&tree, &StrategyConfig::new(Strategy::IterativeSampling, 1).with_seed(mix64(seed ^ r as u64)))?;
        total += out.iterations;
    }
    Ok(total as f64 / runs as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::fixtures::fixture;
    use crate::planners::{PlannerConfig, PlannerKind};

    #[test]
    fn empty_goal_problem_solved_at_root() {
        let pb = crate::problem::ProblemBuilder::new("e").init(["p"]).build().unwrap();
        let pl = Planner::new(&pb, PlannerConfig::new(PlannerKind::Ua));
        for s in Strategy::ALL {
            let out = search(&PlanSpace { planner: &pl }, &StrategyConfig::new(s, 3)).unwrap();
            assert!(out.solved);
            assert_eq!(out.nodes_expanded, 1);
            assert_eq!(out.solution_depth, Some(0));
        }
    }

    #[test]
    fn bfs_sussman() {
        let pb = fixture("sussman").unwrap();
        for kind in [PlannerKind::To, PlannerKind::Ua] {
            let pl = Planner::new(&pb, PlannerConfig::new(kind));
            let out = bfs(&PlanSpace { planner: &pl }, &StrategyConfig::new(Strategy::Bfs, 3)).unwrap();
            assert!(out.solved);
            assert_eq!(out.solution.unwrap().plan.length(), 3);
            assert_eq!(out.per_level_counts.iter().sum::<usize>(), out.nodes_expanded);
        }
    }

    #[test]
    fn dfs_respects_depth_limit_and_is_reproducible() {
        let pb = fixture("sussman").unwrap();
        let pl = Planner::new(&pb, PlannerConfig::new(PlannerKind::To));
        let space = PlanSpace { planner: &pl };
        for seed in 0..5 {
            let cfg = StrategyConfig::new(Strategy::Dfs, 3).with_seed(seed);
            let a = dfs(&space, &cfg).unwrap();
            let b = dfs(&space, &cfg).unwrap();
            assert!(a.solved);
            assert_eq!(a.per_level_counts.len(), 4);
            assert_eq!((a.nodes_expanded, a.leaves_visited), (b.nodes_expanded, b.leaves_visited));
        }
    }

    #[test]
    fn broadening_final_pass_matches_dfs() {
        let tree = ExplicitTree::complete(&[3, 3, 2], &[17]);
        for seed in 0..20 {
            let cfg = StrategyConfig::new(Strategy::Dfs, 3).with_seed(seed);
            let plain = dfs(&tree, &cfg).unwrap();
            let mut last = SearchOutcome::new(seed);
            // A single pass with cutoff at the full branching factor.
            let mut d = Dfs { space: &tree, cfg: &cfg, breadth: 3, truncated: false };
            d.go(0, 0, &mut last).unwrap();
            assert_eq!(last.nodes_expanded, plain.nodes_expanded);
            assert_eq!(last.solution, plain.solution);
            let ib = iterative_broadening(&tree, &cfg).unwrap();
            assert!(ib.solved);
        }
    }

    #[test]
    fn broadening_cutoff_one_is_a_single_path() {
        let tree = ExplicitTree::complete(&[2, 2, 2], &[]);
        let cfg = StrategyConfig::new(Strategy::Dfs, 3);
        let mut out = SearchOutcome::new(0);
        let mut d = Dfs { space: &tree, cfg: &cfg, breadth: 1, truncated: false };
        d.go(0, 0, &mut out).unwrap();
        assert_eq!(out.nodes_expanded, 4);
        assert_eq!(out.leaves_visited, 1);
        // Unsolvable: broadening stops once nothing is cut off.
        let ib = iterative_broadening(&tree, &cfg).unwrap();
        assert!(!ib.solved);
        assert_eq!(ib.iterations, 2);
    }

    #[test]
    fn sampling_all_solutions_takes_one_probe() {
        let tree = ExplicitTree::complete(&[2, 2], &[0, 1, 2, 3]);
        let out = iterative_sampling(&tree, &StrategyConfig::new(Strategy::IterativeSampling, 2)).unwrap();
        assert_eq!(out.iterations, 1);
        let none = ExplicitTree::complete(&[2], &[]);
        let mut cfg = StrategyConfig::new(Strategy::IterativeSampling, 1);
        cfg.max_iterations = 10;
        let out = iterative_sampling(&none, &cfg).unwrap();
        assert!(out.exhausted && !out.solved);
        assert_eq!(out.iterations, 10);
    }

    #[test]
    fn prune_keeps_only_best() {
        let mut tree = ExplicitTree::complete(&[4], &[]);
        tree.rating = alloc::vec![3, 2, 1, 1, 5];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let kept = arrange(&tree, alloc::vec![1, 2, 3, 4], Heuristic::MinGoalsPrune, &mut rng);
        assert_eq!(kept.len(), 2);
        assert!(kept.iter().all(|&c| tree.rating[c] == 1));
        let ranked = arrange(&tree, alloc::vec![1, 2, 3, 4], Heuristic::MinGoalsRank, &mut rng);
        assert_eq!(ranked.iter().map(|&c| tree.rating[c]).collect::<Vec<_>>(), [1, 1, 2, 5]);
        let prob = arrange(&tree, alloc::vec![1, 2, 3, 4], Heuristic::MinGoalsProbabilistic, &mut rng);
        assert_eq!(prob.len(), 4);
    }

    #[test]
    fn rank_expands_preferred_ordering_first() {
        let pb = fixture("ordering_preference").unwrap();
        let plan = crate::domains::fixtures::depicted_plan("ordering_preference", &pb).unwrap();
        let pl = Planner::new(&pb, PlannerConfig::new(PlannerKind::Ua));
        let goals = pl.goals(&plan).unwrap().entries;
        let children = pl.expand(&plan, &goals).unwrap().children;
        let space = PlanSpace { planner: &pl };
        for seed in 0..10 {
            let mut rng = node_rng(seed, plan.id());
            let first = &arrange(&space, children.clone(), Heuristic::MinGoalsRank, &mut rng)[0];
            assert!(first.plan.precedes(3, 4));
            assert_eq!(min_goals_rating(&first.plan, Semantics::Unambiguous).unwrap(), 0);
        }
    }
}
