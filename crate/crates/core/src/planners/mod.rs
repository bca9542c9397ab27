//! Plan-extension generators: each maps a plan and its open goals to the
//! complete, deterministically ordered list of child plans.
//!
//! | kind | goals                       | ordering selection                 |
//! |------|-----------------------------|------------------------------------|
//! | TO   | false preconditions          | insert between last deleter and need |
//! | UA   | necessarily false            | order interacting steps only       |
//! | TO-C | as TO, conditional adders   | as TO, plus role selection         |
//! | UA-C | as UA, conditional adders   | conditional interactions + roles   |
//! | MT   | not necessarily true        | demotion / white knights           |

mod conditional;
mod mt;
mod to;
mod ua;

use alloc::vec::Vec;

pub use conditional::{specialize, specialize_with, SubsetMode};

use crate::error::{Error, Result};
use crate::plan::{mix64, Plan, Step, DEFAULT_STEP_CEILING};
use crate::problem::Problem;
use crate::prop::{Prop, PropSet};
use crate::truth::{self, GoalEntry, InteractionMode, Semantics};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlannerKind {
    To,
    Ua,
    Toc,
    Uac,
    Mt,
}

impl PlannerKind {
    pub const ALL: [PlannerKind; 5] = [PlannerKind::To, PlannerKind::Ua, PlannerKind::Toc, PlannerKind::Uac, PlannerKind::Mt];

    pub fn semantics(self) -> Semantics {
        match self {
            PlannerKind::To | PlannerKind::Toc => Semantics::TotalOrder,
            PlannerKind::Ua | PlannerKind::Uac => Semantics::Unambiguous,
            PlannerKind::Mt => Semantics::Modal,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PlannerKind::To => "to",
            PlannerKind::Ua => "ua",
            PlannerKind::Toc => "toc",
            PlannerKind::Uac => "uac",
            PlannerKind::Mt => "mt",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        PlannerKind::ALL.into_iter().find(|k| k.name() == s)
    }

    /// The total-order planner whose tree this one's is compared against.
    pub fn total_order_counterpart(self) -> PlannerKind {
        match self {
            PlannerKind::Uac | PlannerKind::Toc => PlannerKind::Toc,
            _ => PlannerKind::To,
        }
    }
}

/// `select-goal`. Both variants are functions of the goal list alone, so
/// corresponding plans in two trees pick the same goal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GoalSelection {
    /// First entry in (needer label, proposition name) order.
    First,
    /// Entry picked by a seeded hash of the whole goal list.
    Seeded(u64),
}

impl GoalSelection {
    pub fn select(self, goals: &[GoalEntry]) -> Option<GoalEntry> {
        if goals.is_empty() {
            return None;
        }
        match self {
            GoalSelection::First => Some(goals[0]),
            GoalSelection::Seeded(seed) => {
                let h = goals.iter().fold(mix64(seed), |h, g| {
                    mix64(h ^ ((g.needer as u64) << 32 | g.condition.index() as u64))
                });
                Some(goals[(h % goals.len() as u64) as usize])
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PlannerConfig {
    pub kind: PlannerKind,
    pub goal_selection: GoalSelection,
    pub subset_mode: SubsetMode,
    pub step_ceiling: usize,
}

impl PlannerConfig {
    pub fn new(kind: PlannerKind) -> Self {
        PlannerConfig {
            kind,
            goal_selection: GoalSelection::First,
            subset_mode: SubsetMode::NonStrict,
            step_ceiling: DEFAULT_STEP_CEILING,
        }
    }

    pub fn with_goal_selection(mut self, g: GoalSelection) -> Self {
        self.goal_selection = g;
        self
    }
}

/// A generated plan with its open goals and the work spent producing it.
#[derive(Clone, Debug)]
pub struct Child {
    pub plan: Plan,
    pub goals: Vec<GoalEntry>,
    /// Edge visits of ordering selection attributable to this child.
    pub step4_visits: usize,
    /// Step/edge visits of goal updating for this child.
    pub step5_visits: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ExtensionCounters {
    pub step4_edge_visits: usize,
    pub step5_visits: usize,
    pub children_count: usize,
}

#[derive(Clone, Debug, Default)]
pub struct ExtensionResult {
    pub children: Vec<Child>,
    pub counters: ExtensionCounters,
}

/// A way to add a proposition: a library operator, possibly specialized on
/// the dependency conditions of one of its conditional adds.
#[derive(Clone, Debug)]
pub(crate) struct Adder {
    pub op: usize,
    pub specialize_on: Option<PropSet>,
}

/// One planner bound to one problem.
#[derive(Clone, Debug)]
pub struct Planner<'a> {
    problem: &'a Problem,
    config: PlannerConfig,
    /// Unconditional adders per proposition, by library index.
    adders: Vec<Vec<usize>>,
    /// Conditional adders per proposition: (operator, dependency set).
    cond_adders: Vec<Vec<(usize, PropSet)>>,
}

impl<'a> Planner<'a> {
    pub fn new(problem: &'a Problem, config: PlannerConfig) -> Self {
        let n = problem.n_props();
        let mut adders = alloc::vec![Vec::new(); n];
        let mut cond_adders = alloc::vec![Vec::new(); n];
        for (i, op) in problem.library().iter().enumerate() {
            for p in op.effects.adds.iter() {
                adders[p.index()].push(i);
            }
            for c in &op.effects.cadds {
                cond_adders[c.effect.index()].push((i, c.deps.clone()));
            }
        }
        Planner { problem, config, adders, cond_adders }
    }

    pub fn problem(&self) -> &'a Problem {
        self.problem
    }

    pub fn config(&self) -> &PlannerConfig {
        &self.config
    }

    pub fn kind(&self) -> PlannerKind {
        self.config.kind
    }

    pub fn semantics(&self) -> Semantics {
        self.config.kind.semantics()
    }

    pub fn interaction_mode(&self) -> InteractionMode {
        match self.config.kind {
            PlannerKind::Uac | PlannerKind::Toc => InteractionMode::Conditional,
            _ => InteractionMode::Basic,
        }
    }

    /// The initial plan and its goals.
    pub fn root(&self) -> Child {
        let plan = Plan::initial(self.problem);
        let gs = truth::goal_set(&plan, self.semantics()).expect("initial plan is totally ordered");
        Child { plan, goals: gs.entries, step4_visits: 0, step5_visits: gs.visits }
    }

    pub fn goals(&self, plan: &Plan) -> Result<truth::GoalSet> {
        truth::goal_set(plan, self.semantics())
    }

    pub fn select_goal(&self, goals: &[GoalEntry]) -> Option<GoalEntry> {
        self.config.goal_selection.select(goals)
    }

    /// Ways to add `c`, in library order; unconditional before conditional
    /// for the same operator. Conditional adders only for TO-C/UA-C.
    pub(crate) fn adders_of(&self, c: Prop) -> Vec<Adder> {
        let conditional = matches!(self.config.kind, PlannerKind::Toc | PlannerKind::Uac);
        let mut out: Vec<Adder> = self.adders[c.index()]
            .iter()
            .map(|&op| Adder { op, specialize_on: None })
            .collect();
        if conditional {
            out.extend(
                self.cond_adders[c.index()]
                    .iter()
                    .map(|(op, deps)| Adder { op: *op, specialize_on: Some(deps.clone()) }),
            );
            out.sort_by_key(|a| (a.op, a.specialize_on.is_some()));
        }
        out
    }

    pub(crate) fn new_step(&self, adder: &Adder) -> Step {
        let mut step = Step::library(self.problem, adder.op);
        if let Some(deps) = &adder.specialize_on {
            step.effects = alloc::sync::Arc::new(specialize_with(&step.effects, deps, self.config.subset_mode));
        }
        step
    }

    /// Wraps generated plans with their goal sets.
    pub(crate) fn finish(&self, parent: &Plan, generated: Vec<(Plan, usize)>) -> Result<ExtensionResult> {
        let mut result = ExtensionResult::default();
        for (i, (mut plan, step4)) in generated.into_iter().enumerate() {
            plan.set_lineage(parent, i);
            let gs = self.goals(&plan)?;
            result.counters.step4_edge_visits += step4;
            result.counters.step5_visits += gs.visits;
            result.children.push(Child { plan, goals: gs.entries, step4_visits: step4, step5_visits: gs.visits });
        }
        result.counters.children_count = result.children.len();
        Ok(result)
    }

    /// Children of `plan` under this planner, for the goal `select-goal`
    /// picks from `goals`. No precondition checks beyond a non-empty goal
    /// list; see the per-planner methods for checked entry points.
    pub fn expand(&self, plan: &Plan, goals: &[GoalEntry]) -> Result<ExtensionResult> {
        let goal = self.select_goal(goals).ok_or(Error::AlreadySolved)?;
        match self.config.kind {
            PlannerKind::To | PlannerKind::Toc => self.to_family(plan, goal),
            PlannerKind::Ua | PlannerKind::Uac => self.ua_family(plan, goal, None),
            PlannerKind::Mt => self.mt_extend(plan, goal),
        }
    }

    /// Total-order extension. `plan` must be totally ordered.
    pub fn to_children(&self, plan: &Plan, goals: &[GoalEntry]) -> Result<ExtensionResult> {
        if !plan.is_totally_ordered() {
            return Err(Error::NotTotallyOrdered);
        }
        let goal = self.select_goal(goals).ok_or(Error::AlreadySolved)?;
        self.to_family(plan, goal)
    }

    /// Partial-order extension. Verifies unambiguity with the exact oracle.
    pub fn ua_children(&self, plan: &Plan, goals: &[GoalEntry]) -> Result<ExtensionResult> {
        let goal = self.select_goal(goals).ok_or(Error::AlreadySolved)?;
        if !truth::is_unambiguous(plan) {
            return Err(Error::Ambiguous);
        }
        self.ua_family(plan, goal, None)
    }

    /// Modal-truth extension; accepts ambiguous plans.
    pub fn mt_children(&self, plan: &Plan, goals: &[GoalEntry]) -> Result<ExtensionResult> {
        let goal = self.select_goal(goals).ok_or(Error::AlreadySolved)?;
        self.mt_extend(plan, goal)
    }

    /// UA extension resolving interactions in the given pop order instead
    /// of ascending labels.
    #[doc(hidden)]
    pub fn ua_children_with_pop_order(&self, plan: &Plan, goals: &[GoalEntry], pop_order: &[usize]) -> Result<ExtensionResult> {
        let goal = self.select_goal(goals).ok_or(Error::AlreadySolved)?;
        self.ua_family(plan, goal, Some(pop_order))
    }
}
