//! Plans: labeled steps plus a strict partial order kept as direct edges and
//! a transitive-closure bitmap per step.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::problem::{Effects, Problem};

/// Label of the initial step (adds the initial state).
pub const INITIAL: usize = 0;
/// Label of the final step (requires the goals).
pub const FINAL: usize = 1;
/// Hard limit imposed by the 64-bit closure rows.
pub const MAX_STEPS: usize = 64;
/// Default configurable ceiling on plan size.
pub const DEFAULT_STEP_CEILING: usize = 32;

/// Which operator a step instantiates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SchemaRef {
    Initial,
    Final,
    Library(u32),
}

/// A uniquely labeled operator instance. `effects` starts as the schema's
/// lists and changes only through specialization and role marking.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Step {
    pub schema: SchemaRef,
    pub effects: Arc<Effects>,
}

impl Step {
    pub fn library(problem: &Problem, index: usize) -> Self {
        Step {
            schema: SchemaRef::Library(index as u32),
            effects: problem.library()[index].effects.clone(),
        }
    }

    /// Same schema and identical effective fields (including marks).
    pub fn same_instance(&self, other: &Step) -> bool {
        self.schema == other.schema
            && (Arc::ptr_eq(&self.effects, &other.effects) || self.effects == other.effects)
    }
}

/// Answer of [`Plan::relation`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Before,
    After,
    Unordered,
}

/// Immutable plan value. Extensions copy and then mutate the copy.
#[derive(Clone, Debug)]
pub struct Plan {
    steps: Vec<Step>,
    edges: Vec<(u8, u8)>,
    /// `preds[i]` has bit `j` set iff `j ≺ i`.
    preds: Vec<u64>,
    /// `succs[i]` has bit `j` set iff `i ≺ j`.
    succs: Vec<u64>,
    id: u64,
    parent: Option<u64>,
    depth: u32,
}

fn bit(i: usize) -> u64 {
    1u64 << i
}

pub(crate) fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl Plan {
    /// The two-step plan whose first step adds the initial state and whose
    /// final step requires the goals.
    pub fn initial(problem: &Problem) -> Self {
        let first = Step {
            schema: SchemaRef::Initial,
            effects: Arc::new(Effects { adds: problem.init().clone(), ..Default::default() }),
        };
        let last = Step {
            schema: SchemaRef::Final,
            effects: Arc::new(Effects { pre: problem.goals().clone(), ..Default::default() }),
        };
        Plan {
            steps: alloc::vec![first, last],
            edges: alloc::vec![(0, 1)],
            preds: alloc::vec![0, bit(0)],
            succs: alloc::vec![bit(1), 0],
            id: mix64(0x5eed),
            parent: None,
            depth: 0,
        }
    }

    /// Builds a plan from explicit steps (labels are positions) and edges.
    /// Edges from the initial step and to the final step are added for every
    /// step. Fails on cycles.
    pub fn from_parts(steps: Vec<Step>, edges: &[(usize, usize)]) -> Result<Self> {
        if steps.len() > MAX_STEPS {
            return Err(Error::StepCeiling { steps: steps.len(), ceiling: MAX_STEPS });
        }
        let n = steps.len();
        let mut plan = Plan {
            steps,
            edges: Vec::new(),
            preds: alloc::vec![0; n],
            succs: alloc::vec![0; n],
            id: mix64(0x5eed),
            parent: None,
            depth: 0,
        };
        for s in 2..n {
            plan.add_edge(INITIAL, s)?;
            plan.add_edge(s, FINAL)?;
        }
        plan.add_edge(INITIAL, FINAL)?;
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::UnknownStep(a.max(b)));
            }
            plan.add_edge(a, b)?;
        }
        Ok(plan)
    }

    /// Totally ordered plan `0 ≺ ops[0] ≺ ops[1] ≺ … ≺ 1` over library indices.
    pub fn chain(problem: &Problem, ops: &[usize]) -> Result<Self> {
        let base = Plan::initial(problem);
        let mut steps = base.steps.clone();
        steps.extend(ops.iter().map(|&o| Step::library(problem, o)));
        let mut edges = Vec::new();
        let mut prev = INITIAL;
        for i in 0..ops.len() {
            edges.push((prev, i + 2));
            prev = i + 2;
        }
        edges.push((prev, FINAL));
        Plan::from_parts(steps, &edges)
    }

    pub fn n_steps(&self) -> usize {
        self.steps.len()
    }

    /// Number of steps excluding the initial and final steps.
    pub fn length(&self) -> usize {
        self.steps.len() - 2
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn step(&self, label: usize) -> &Step {
        &self.steps[label]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().map(|&(a, b)| (a as usize, b as usize))
    }

    /// Direct edges as stored, including redundant ones.
    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// Size of the transitive reduction: the fewest edges that represent
    /// the order.
    pub fn n_required_edges(&self) -> usize {
        (0..self.steps.len())
            .map(|a| {
                let s = self.succs[a];
                let mut implied = 0u64;
                let mut m = s;
                while m != 0 {
                    let c = m.trailing_zeros() as usize;
                    m &= m - 1;
                    implied |= self.succs[c];
                }
                (s & !implied).count_ones() as usize
            })
            .sum()
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn parent(&self) -> Option<u64> {
        self.parent
    }

    pub fn depth(&self) -> usize {
        self.depth as usize
    }

    /// Bitmask of steps strictly before `label`.
    pub fn preds_mask(&self, label: usize) -> u64 {
        self.preds[label]
    }

    /// Bitmask of steps strictly after `label`.
    pub fn succs_mask(&self, label: usize) -> u64 {
        self.succs[label]
    }

    pub fn all_mask(&self) -> u64 {
        if self.steps.len() == 64 {
            u64::MAX
        } else {
            bit(self.steps.len()) - 1
        }
    }

    /// `a ≺ b` in the transitive closure.
    pub fn precedes(&self, a: usize, b: usize) -> bool {
        self.succs[a] & bit(b) != 0
    }

    pub fn ordered(&self, a: usize, b: usize) -> bool {
        self.precedes(a, b) || self.precedes(b, a)
    }

    /// `a` can be placed before `b` in some linearization (`a ≠ b`).
    pub fn possibly_before(&self, a: usize, b: usize) -> bool {
        a != b && !self.precedes(b, a)
    }

    pub fn relation(&self, a: usize, b: usize) -> Result<Relation> {
        let n = self.steps.len();
        if a >= n {
            return Err(Error::UnknownStep(a));
        }
        if b >= n {
            return Err(Error::UnknownStep(b));
        }
        Ok(if self.precedes(a, b) {
            Relation::Before
        } else if self.precedes(b, a) {
            Relation::After
        } else {
            Relation::Unordered
        })
    }

    pub fn is_totally_ordered(&self) -> bool {
        let n = self.steps.len() as u32;
        (0..self.steps.len()).all(|i| (self.preds[i] | self.succs[i]).count_ones() == n - 1)
    }

    /// The step sequence if the plan is totally ordered.
    pub fn total_order(&self) -> Option<Vec<usize>> {
        if !self.is_totally_ordered() {
            return None;
        }
        let mut seq = alloc::vec![0; self.steps.len()];
        for i in 0..self.steps.len() {
            seq[self.preds[i].count_ones() as usize] = i;
        }
        Some(seq)
    }

    /// Kahn's algorithm over the direct edges, smallest ready label first.
    /// Returns the order and the number of node+edge visits.
    pub fn topological_order(&self) -> (Vec<usize>, usize) {
        let n = self.steps.len();
        let mut indeg = alloc::vec![0usize; n];
        let mut out: Vec<Vec<usize>> = alloc::vec![Vec::new(); n];
        for (a, b) in self.edges() {
            indeg[b] += 1;
            out[a].push(b);
        }
        let mut visits = self.edges.len();
        let mut ready: alloc::collections::BinaryHeap<core::cmp::Reverse<usize>> =
            (0..n).filter(|&i| indeg[i] == 0).map(core::cmp::Reverse).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(core::cmp::Reverse(v)) = ready.pop() {
            visits += 1;
            order.push(v);
            for &w in &out[v] {
                visits += 1;
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    ready.push(core::cmp::Reverse(w));
                }
            }
        }
        (order, visits)
    }

    /// Copy for a child in the derivation tree.
    pub(crate) fn derive(&self, child_index: usize) -> Plan {
        let mut p = self.clone();
        p.set_lineage(self, child_index);
        p
    }

    /// Makes this plan the `child_index`-th child of `parent`.
    pub(crate) fn set_lineage(&mut self, parent: &Plan, child_index: usize) {
        self.parent = Some(parent.id);
        self.id = mix64(parent.id ^ mix64(child_index as u64 + 1));
        self.depth = parent.depth + 1;
    }

    /// Appends a step, returning its label. Callers order it afterwards.
    pub(crate) fn push_step(&mut self, step: Step, ceiling: usize) -> Result<usize> {
        let n = self.steps.len() + 1;
        if n > ceiling.min(MAX_STEPS) {
            return Err(Error::StepCeiling { steps: n, ceiling: ceiling.min(MAX_STEPS) });
        }
        self.steps.push(step);
        self.preds.push(0);
        self.succs.push(0);
        Ok(n - 1)
    }

    pub(crate) fn replace_step(&mut self, label: usize, step: Step) {
        self.steps[label] = step;
    }

    /// Records the direct edge `a → b` and updates the closure. Fails if the
    /// edge would close a cycle.
    pub(crate) fn add_edge(&mut self, a: usize, b: usize) -> Result<()> {
        if a == b || self.precedes(b, a) {
            return Err(Error::Cycle { from: a, to: b });
        }
        if !self.edges.contains(&(a as u8, b as u8)) {
            self.edges.push((a as u8, b as u8));
        }
        if self.precedes(a, b) {
            return Ok(());
        }
        let before = self.preds[a] | bit(a);
        let after = self.succs[b] | bit(b);
        let mut m = before;
        while m != 0 {
            let x = m.trailing_zeros() as usize;
            m &= m - 1;
            self.succs[x] |= after;
        }
        let mut m = after;
        while m != 0 {
            let y = m.trailing_zeros() as usize;
            m &= m - 1;
            self.preds[y] |= before;
        }
        Ok(())
    }

    /// Replaces a direct edge `a → b` by `a → s → b` for a fresh step `s`
    /// (total-order insertion).
    pub(crate) fn split_edge(&mut self, a: usize, b: usize, s: usize) -> Result<()> {
        self.edges.retain(|&e| e != (a as u8, b as u8));
        self.add_edge(a, s)?;
        self.add_edge(s, b)
    }

    /// Subplan keeping the steps in `keep` (a mask that must contain the
    /// initial and final steps). Kept steps are relabeled in ascending
    /// order; the order is the closure restricted to them.
    pub fn restrict(&self, keep: u64) -> Plan {
        let labels: Vec<usize> = (0..self.steps.len()).filter(|&i| keep & bit(i) != 0).collect();
        let steps = labels.iter().map(|&i| self.steps[i].clone()).collect();
        let mut edges = Vec::new();
        for (ni, &i) in labels.iter().enumerate() {
            for (nj, &j) in labels.iter().enumerate() {
                if self.precedes(i, j) {
                    edges.push((ni, nj));
                }
            }
        }
        let mut p = Plan::from_parts(steps, &edges).expect("restriction of an acyclic order is acyclic");
        p.depth = self.depth;
        p
    }

    /// Totally ordered plan over the same steps following `seq`, which must
    /// be a linearization of this plan.
    pub fn with_total_order(&self, seq: &[usize]) -> Plan {
        let edges: Vec<(usize, usize)> = seq.windows(2).map(|w| (w[0], w[1])).collect();
        let mut p = Plan::from_parts(self.steps.clone(), &edges).expect("sequence is a linearization");
        p.depth = self.depth;
        p
    }

    /// Structural identity: same steps (by label) and same closure.
    pub fn same_structure(&self, other: &Plan) -> bool {
        self.steps.len() == other.steps.len()
            && self.preds == other.preds
            && self.steps.iter().zip(&other.steps).all(|(a, b)| a.same_instance(b))
    }

    /// Library indices by label (`None` for the initial and final steps).
    pub fn schema_of(&self, label: usize) -> Option<usize> {
        match self.steps[label].schema {
            SchemaRef::Library(i) => Some(i as usize),
            _ => None,
        }
    }

    /// Irreflexive closure, every step between initial and final, and
    /// lineage consistent with depth.
    pub fn check_invariants(&self) -> bool {
        let n = self.steps.len();
        (0..n).all(|i| self.preds[i] & bit(i) == 0)
            && (2..n).all(|i| self.precedes(INITIAL, i) && self.precedes(i, FINAL))
            && (self.depth == 0) == self.parent.is_none()
    }
}
