//! Exhaustive search trees and the linearization map between a partial-order
//! tree and its total-order counterpart.
//!
//! A TO node `T` is in the image `ℒ(U)` of a UA node `U` when `T`'s plan is
//! a linearization of `U`'s and either both are roots or `parent(T)` is in
//! `ℒ(parent(U))`. The map is built top-down, so derivational ancestry is
//! respected by construction.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linearize::{count_linearizations, equivalent, is_linearization};
use crate::plan::{Plan, Step, INITIAL};
use crate::planners::{GoalSelection, Planner, PlannerKind};
use crate::problem::Problem;
use crate::prop::Prop;
use crate::truth::{self, GoalEntry, ModalStatus};

pub const DEFAULT_NODE_CEILING: usize = 1_000_000;

#[derive(Clone, Debug)]
pub struct TreeNode {
    pub id: usize,
    pub parent: Option<usize>,
    pub depth: usize,
    pub plan: Plan,
    pub goals: Vec<GoalEntry>,
    pub children: Vec<usize>,
    pub is_solution: bool,
    /// Not a solution, above the depth limit, and without children.
    pub is_dead_end: bool,
    pub step4_visits: usize,
    pub step5_visits: usize,
}

/// A search tree enumerated to a depth limit. Node ids are preorder
/// positions, so `nodes[0]` is the root.
#[derive(Clone, Debug)]
pub struct SearchTree {
    pub kind: PlannerKind,
    pub problem: String,
    pub goal_selection: GoalSelection,
    pub depth_limit: usize,
    pub nodes: Vec<TreeNode>,
}

impl SearchTree {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> &TreeNode {
        &self.nodes[0]
    }

    pub fn node(&self, id: usize) -> &TreeNode {
        &self.nodes[id]
    }

    /// Nodes without children, left to right.
    pub fn leaves(&self) -> impl Iterator<Item = &TreeNode> + '_ {
        self.nodes.iter().filter(|n| n.children.is_empty())
    }

    pub fn solutions(&self) -> impl Iterator<Item = &TreeNode> + '_ {
        self.nodes.iter().filter(|n| n.is_solution)
    }

    /// Depth of the shallowest solution.
    pub fn first_solution_depth(&self) -> Option<usize> {
        self.solutions().map(|n| n.depth).min()
    }

    pub fn is_ancestor(&self, a: usize, mut b: usize) -> bool {
        while let Some(p) = self.nodes[b].parent {
            if p == a {
                return true;
            }
            b = p;
        }
        false
    }

    /// Tree of a total-order planner: every node's plan is totally ordered.
    pub fn all_totally_ordered(&self) -> bool {
        self.nodes.iter().all(|n| n.plan.is_totally_ordered())
    }
}

/// Enumerates every node to `depth_limit` in preorder. Solutions are not
/// expanded. Fails once more than `ceiling` nodes would be stored.
pub fn enumerate_tree(planner: &Planner<'_>, depth_limit: usize, ceiling: usize) -> Result<SearchTree> {
    let mut tree = SearchTree {
        kind: planner.kind(),
        problem: planner.problem().name().into(),
        goal_selection: planner.config().goal_selection,
        depth_limit,
        nodes: Vec::new(),
    };
    let root = planner.root();
    // (parent id, child)
    let mut stack = alloc::vec![(None, root)];
    while let Some((parent, child)) = stack.pop() {
        if tree.nodes.len() >= ceiling {
            return Err(Error::NodeCeiling { ceiling, count: tree.nodes.len() });
        }
        let id = tree.nodes.len();
        let depth = parent.map_or(0, |p: usize| tree.nodes[p].depth + 1);
        let is_solution = child.goals.is_empty();
        let mut kids = Vec::new();
        if !is_solution && depth < depth_limit {
            kids = planner.expand(&child.plan, &child.goals)?.children;
        }
        let is_dead_end = !is_solution && depth < depth_limit && kids.is_empty();
        tree.nodes.push(TreeNode {
            id,
            parent,
            depth,
            plan: child.plan,
            goals: child.goals,
            children: Vec::new(),
            is_solution,
            is_dead_end,
            step4_visits: child.step4_visits,
            step5_visits: child.step5_visits,
        });
        if let Some(p) = parent {
            tree.nodes[p].children.push(id);
        }
        stack.extend(kids.into_iter().rev().map(|k| (Some(id), k)));
    }
    Ok(tree)
}

/// `images[u]` lists the TO node ids in `ℒ(u)`, ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrespondenceMap {
    pub images: Vec<Vec<usize>>,
    /// Size of the total-order tree the images index into.
    pub target_len: usize,
}

impl CorrespondenceMap {
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.images
            .iter()
            .enumerate()
            .flat_map(|(u, ts)| ts.iter().map(move |&t| (u, t)))
    }

    /// How many source nodes claim each target node.
    pub fn preimage_counts(&self) -> Vec<usize> {
        let mut counts = alloc::vec![0; self.target_len];
        for (_, t) in self.pairs() {
            counts[t] += 1;
        }
        counts
    }

    pub fn image_total(&self) -> usize {
        self.images.iter().map(Vec::len).sum()
    }
}

fn check_compatible(a: &SearchTree, b: &SearchTree) -> Result<()> {
    if a.problem != b.problem || a.depth_limit != b.depth_limit || a.goal_selection != b.goal_selection {
        return Err(Error::MismatchedTrees);
    }
    if b.kind != a.kind.total_order_counterpart() || !matches!(b.kind, PlannerKind::To | PlannerKind::Toc) {
        return Err(Error::MismatchedTrees);
    }
    Ok(())
}

/// Builds `ℒ` top-down from the roots.
#[allow(non_snake_case)]
pub fn build_L(tree_ua: &SearchTree, tree_to: &SearchTree) -> Result<CorrespondenceMap> {
    check_compatible(tree_ua, tree_to)?;
    let mut images = alloc::vec![Vec::new(); tree_ua.len()];
    images[0].push(0);
    // Preorder ids put every parent before its children.
    for u in 0..tree_ua.len() {
        let parents = core::mem::take(&mut images[u]);
        for &t in &parents {
            for &uc in &tree_ua.nodes[u].children {
                let up = &tree_ua.nodes[uc].plan;
                for &tc in &tree_to.nodes[t].children {
                    if is_linearization(&tree_to.nodes[tc].plan, up) {
                        images[uc].push(tc);
                    }
                }
            }
        }
        images[u] = parents;
    }
    for im in &mut images {
        im.sort_unstable();
    }
    Ok(CorrespondenceMap { images, target_len: tree_to.len() })
}

/// Diagnostic map for a planner whose extensions need not add a step (MT):
/// each node maps to every total-order node whose plan is one of its
/// linearizations, ignoring ancestry.
pub fn build_linearization_map(source: &SearchTree, tree_to: &SearchTree) -> Result<CorrespondenceMap> {
    if source.problem != tree_to.problem || !tree_to.all_totally_ordered() {
        return Err(Error::MismatchedTrees);
    }
    let images = source
        .nodes
        .iter()
        .map(|n| {
            tree_to
                .nodes
                .iter()
                .filter(|t| t.plan.length() == n.plan.length() && is_linearization(&t.plan, &n.plan))
                .map(|t| t.id)
                .collect()
        })
        .collect();
    Ok(CorrespondenceMap { images, target_len: tree_to.len() })
}

/// Outcome of one verification pass; `violations` holds offending node ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub check: &'static str,
    pub checked: usize,
    pub violations: Vec<usize>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Every source node has a non-empty image.
pub fn verify_totality(map: &CorrespondenceMap) -> Report {
    Report {
        check: "totality",
        checked: map.images.len(),
        violations: (0..map.images.len()).filter(|&u| map.images[u].is_empty()).collect(),
    }
}

/// No target node lies in two images. Violations are target ids.
pub fn verify_disjointness(map: &CorrespondenceMap) -> Report {
    let counts = map.preimage_counts();
    Report {
        check: "disjointness",
        checked: map.target_len,
        violations: (0..map.target_len).filter(|&t| counts[t] > 1).collect(),
    }
}

/// Disjointness restricted to source nodes where neither is an ancestor of
/// the other. Used for the MT diagnostic, where a child that only adds
/// orderings necessarily shares linearizations with its parent.
pub fn verify_disjointness_unrelated(map: &CorrespondenceMap, source: &SearchTree) -> Report {
    let mut owners: Vec<Vec<usize>> = alloc::vec![Vec::new(); map.target_len];
    for (u, t) in map.pairs() {
        owners[t].push(u);
    }
    let violations = (0..map.target_len)
        .filter(|&t| {
            let o = &owners[t];
            o.iter().enumerate().any(|(i, &a)| {
                o[i + 1..]
                    .iter()
                    .any(|&b| !source.is_ancestor(a, b) && !source.is_ancestor(b, a))
            })
        })
        .collect();
    Report { check: "disjointness (unrelated nodes)", checked: map.target_len, violations }
}

/// Every target node lies in exactly one image.
pub fn verify_partition(map: &CorrespondenceMap) -> Report {
    let counts = map.preimage_counts();
    Report {
        check: "partition",
        checked: map.target_len,
        violations: (0..map.target_len).filter(|&t| counts[t] != 1).collect(),
    }
}

/// `|ℒ(U)|` equals the number of linearizations of `U`'s plan.
pub fn verify_image_sizes(map: &CorrespondenceMap, tree_ua: &SearchTree) -> Report {
    Report {
        check: "image sizes",
        checked: map.images.len(),
        violations: (0..map.images.len())
            .filter(|&u| count_linearizations(&tree_ua.nodes[u].plan) != map.images[u].len() as u128)
            .collect(),
    }
}

/// Every node's plan is unambiguous, by the all-linearizations oracle.
pub fn verify_unambiguous(tree: &SearchTree) -> Report {
    Report {
        check: "unambiguity",
        checked: tree.len(),
        violations: tree
            .nodes
            .iter()
            .filter(|n| !truth::is_unambiguous(&n.plan))
            .map(|n| n.id)
            .collect(),
    }
}

/// Shape of a tree up to a depth bound.
#[derive(Clone, Debug, PartialEq)]
pub struct TreeStats {
    pub node_count: usize,
    pub leaf_count: usize,
    pub solution_leaf_count: usize,
    pub solution_density: f64,
    pub per_level: Vec<usize>,
    pub clustering: Clustering,
}

/// Descriptive statistics of where solutions fall in the left-to-right leaf
/// order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Clustering {
    /// Mean distance between consecutive solution leaves (0 with fewer than
    /// two solutions).
    pub mean_gap: f64,
    pub gap_variance: f64,
    /// Longest run of adjacent solution leaves.
    pub max_run_length: usize,
}

pub fn clustering(leaves: &[bool]) -> Clustering {
    let pos: Vec<usize> = leaves.iter().enumerate().filter(|(_, s)| **s).map(|(i, _)| i).collect();
    let gaps: Vec<f64> = pos.windows(2).map(|w| (w[1] - w[0]) as f64).collect();
    let (mean_gap, gap_variance) = if gaps.is_empty() {
        (0.0, 0.0)
    } else {
        let m = gaps.iter().sum::<f64>() / gaps.len() as f64;
        (m, gaps.iter().map(|g| (g - m) * (g - m)).sum::<f64>() / gaps.len() as f64)
    };
    let (mut run, mut max_run_length) = (0, 0);
    for &s in leaves {
        run = if s { run + 1 } else { 0 };
        max_run_length = max_run_length.max(run);
    }
    Clustering { mean_gap, gap_variance, max_run_length }
}

/// Leaves are nodes at `depth_bound` or without children above it.
pub fn tree_stats(tree: &SearchTree, depth_bound: usize) -> TreeStats {
    let mut per_level = alloc::vec![0; depth_bound.min(tree.depth_limit) + 1];
    let mut leaves = Vec::new();
    for n in tree.nodes.iter().filter(|n| n.depth <= depth_bound) {
        per_level[n.depth] += 1;
        if n.depth == depth_bound || n.children.is_empty() {
            leaves.push(n.is_solution);
        }
    }
    let solution_leaf_count = leaves.iter().filter(|s| **s).count();
    TreeStats {
        node_count: per_level.iter().sum(),
        leaf_count: leaves.len(),
        solution_leaf_count,
        solution_density: if leaves.is_empty() { 0.0 } else { solution_leaf_count as f64 / leaves.len() as f64 },
        per_level,
        clustering: clustering(&leaves),
    }
}

/// `Σ n_u·|ℒ(U)| / Σ e_u` over UA nodes down to `depth_bound`, with `n_u`
/// the step count and `e_u` the number of edges needed to represent the
/// order (its transitive reduction).
pub fn cost_ratio(tree_ua: &SearchTree, map: &CorrespondenceMap, depth_bound: usize) -> f64 {
    let (mut num, mut den) = (0usize, 0usize);
    for n in tree_ua.nodes.iter().filter(|n| n.depth <= depth_bound) {
        num += n.plan.n_steps() * map.images[n.id].len();
        den += n.plan.n_required_edges();
    }
    num as f64 / den as f64
}

/// The goal `select-goal` picks among the false preconditions, computed by
/// the all-linearizations oracle rather than by planner code.
fn oracle_goal(plan: &Plan, selection: GoalSelection) -> Option<GoalEntry> {
    let mut goals: Vec<GoalEntry> = truth::precondition_statuses(plan)
        .into_iter()
        .filter(|(_, s)| *s == ModalStatus::NecessarilyFalse)
        .map(|(e, _)| e)
        .collect();
    goals.sort_unstable();
    selection.select(&goals)
}

fn adders(problem: &Problem, c: Prop) -> impl Iterator<Item = usize> + '_ {
    problem
        .library()
        .iter()
        .enumerate()
        .filter(move |(_, op)| op.effects.adds.contains(c))
        .map(|(i, _)| i)
}

/// Every plan meeting the TO-Extension Lemma conditions for `t0`: each
/// adder of the selected goal in each position before the needer and after
/// the last deleter. Unconditional operators only.
pub fn to_extension_oracle(problem: &Problem, t0: &Plan, selection: GoalSelection) -> Result<Vec<Plan>> {
    let seq = t0.total_order().ok_or(Error::NotTotallyOrdered)?;
    let goal = oracle_goal(t0, selection).ok_or(Error::AlreadySolved)?;
    let c = goal.condition;
    let new = t0.n_steps();
    let mut out = Vec::new();
    for op in adders(problem, c) {
        let mut steps = t0.steps().to_vec();
        steps.push(Step::library(problem, op));
        // Insert after position i of the sequence.
        for i in 0..seq.len() - 1 {
            let mut s1 = seq.clone();
            s1.insert(i + 1, new);
            let need_pos = s1.iter().position(|&s| s == goal.needer).expect("needer");
            if i + 1 >= need_pos {
                continue;
            }
            let del_pos = s1[..need_pos]
                .iter()
                .rposition(|&s| steps[s].effects.dels.contains(c))
                .unwrap_or(0);
            if del_pos > i {
                continue;
            }
            let edges: Vec<(usize, usize)> = s1.windows(2).map(|w| (w[0], w[1])).collect();
            out.push(Plan::from_parts(steps.clone(), &edges)?);
        }
    }
    Ok(out)
}

fn unordered_interaction(plan: &Plan, a: usize, b: usize) -> bool {
    if plan.ordered(a, b) {
        return false;
    }
    let (x, y) = (&plan.step(a).effects, &plan.step(b).effects);
    x.pre.intersects(&y.adds)
        || x.pre.intersects(&y.dels)
        || y.pre.intersects(&x.adds)
        || y.pre.intersects(&x.dels)
        || x.adds.intersects(&y.dels)
        || y.adds.intersects(&x.dels)
}

/// Last deleter of `c` for `needer`: a deleter preceding `needer` that
/// follows every other deleter possibly before `needer`; the initial step
/// when there are none. `None` when no such step exists.
fn oracle_last_deleter(plan: &Plan, c: Prop, needer: usize) -> Option<usize> {
    let dels: Vec<usize> = (2..plan.n_steps())
        .filter(|&s| s != needer && plan.step(s).effects.dels.contains(c) && !plan.precedes(needer, s))
        .collect();
    if dels.is_empty() {
        return Some(INITIAL);
    }
    dels.iter()
        .copied()
        .find(|&d| plan.precedes(d, needer) && dels.iter().all(|&o| o == d || plan.precedes(o, d)))
}

/// Every plan meeting the UA-Extension Lemma conditions for `u0`: for each
/// adder of the selected goal, all 3^k placements relative to the existing
/// steps, filtered by the conditions and reduced to the minimal orderings.
/// Unconditional operators only.
pub fn ua_extension_oracle(problem: &Problem, u0: &Plan, selection: GoalSelection) -> Result<Vec<Plan>> {
    let goal = oracle_goal(u0, selection).ok_or(Error::AlreadySolved)?;
    let c = goal.condition;
    let new = u0.n_steps();
    let middle: Vec<usize> = (2..new).collect();
    let base: Vec<(usize, usize)> = u0.edges().collect();
    let mut out = Vec::new();
    for op in adders(problem, c) {
        let mut steps = u0.steps().to_vec();
        steps.push(Step::library(problem, op));
        let mut valid: Vec<Plan> = Vec::new();
        let total = 3usize.pow(middle.len() as u32);
        for code in 0..total {
            let mut edges = base.clone();
            let mut x = code;
            for &s in &middle {
                match x % 3 {
                    1 => edges.push((s, new)),
                    2 => edges.push((new, s)),
                    _ => {}
                }
                x /= 3;
            }
            let Ok(u1) = Plan::from_parts(steps.clone(), &edges) else { continue };
            if !u1.precedes(new, goal.needer) {
                continue;
            }
            match oracle_last_deleter(&u1, c, goal.needer) {
                Some(d) if d == INITIAL || u1.precedes(d, new) => {}
                _ => continue,
            }
            if (0..new).any(|s| unordered_interaction(&u1, s, new)) {
                continue;
            }
            if !valid.iter().any(|v| v.same_structure(&u1)) {
                valid.push(u1);
            }
        }
        let minimal: Vec<Plan> = valid
            .iter()
            .filter(|p| !valid.iter().any(|q| !q.same_structure(p) && closure_subset(q, p)))
            .cloned()
            .collect();
        out.extend(minimal);
    }
    Ok(out)
}

/// Order of `a` is contained in the order of `b` (same labels).
fn closure_subset(a: &Plan, b: &Plan) -> bool {
    (0..a.n_steps()).all(|i| a.preds_mask(i) & !b.preds_mask(i) == 0)
}

/// Two plan lists agree up to equivalence, counting multiplicity.
pub fn same_up_to_equivalence(a: &[Plan], b: &[Plan]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = alloc::vec![false; b.len()];
    a.iter().all(|p| {
        match (0..b.len()).find(|&j| !used[j] && equivalent(p, &b[j])) {
            Some(j) => {
                used[j] = true;
                true
            }
            None => false,
        }
    })
}

/// For every pair `(U₁, T₁)` in the map with parents `(U₀, T₀)`: `T₀` is a
/// linearization of `U₀` and `T₁` is among the TO-Extension Lemma plans
/// for `T₀`. Violations are TO node ids.
pub fn verify_mapping_lemma(
    problem: &Problem,
    map: &CorrespondenceMap,
    tree_ua: &SearchTree,
    tree_to: &SearchTree,
) -> Result<Report> {
    let mut cache: Vec<Option<Vec<Plan>>> = alloc::vec![None; tree_to.len()];
    let mut violations = Vec::new();
    let mut checked = 0;
    for (u1, t1) in map.pairs() {
        let (Some(u0), Some(t0)) = (tree_ua.nodes[u1].parent, tree_to.nodes[t1].parent) else { continue };
        checked += 1;
        let t0p = &tree_to.nodes[t0].plan;
        if !is_linearization(t0p, &tree_ua.nodes[u0].plan) {
            violations.push(t1);
            continue;
        }
        if cache[t0].is_none() {
            cache[t0] = Some(to_extension_oracle(problem, t0p, tree_to.goal_selection)?);
        }
        let ext = cache[t0].as_ref().expect("filled");
        if !ext.iter().any(|p| equivalent(p, &tree_to.nodes[t1].plan)) {
            violations.push(t1);
        }
    }
    Ok(Report { check: "mapping lemma", checked, violations })
}

/// Every check of a verified TO/UA pair.
#[derive(Clone, Debug)]
pub struct Verification {
    pub ua_size: usize,
    pub to_size: usize,
    pub image_total: usize,
    pub reports: Vec<Report>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(Report::passed)
    }
}

/// Builds the map and runs totality, disjointness, partition, image sizes,
/// unambiguity and the mapping lemma.
pub fn verify_pair(problem: &Problem, tree_ua: &SearchTree, tree_to: &SearchTree) -> Result<(CorrespondenceMap, Verification)> {
    let map = build_L(tree_ua, tree_to)?;
    let reports = alloc::vec![
        verify_totality(&map),
        verify_disjointness(&map),
        verify_partition(&map),
        verify_image_sizes(&map, tree_ua),
        verify_unambiguous(tree_ua),
        Report {
            check: "total order",
            checked: tree_to.len(),
            violations: tree_to.nodes.iter().filter(|n| !n.plan.is_totally_ordered()).map(|n| n.id).collect(),
        },
        verify_mapping_lemma(problem, &map, tree_ua, tree_to)?,
    ];
    let v = Verification { ua_size: tree_ua.len(), to_size: tree_to.len(), image_total: map.image_total(), reports };
    Ok((map, v))
}
