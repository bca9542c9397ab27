//! Partial-order extension that orders only interacting steps.
//!
//! Ordering selection labels steps as before or after the new step by
//! graph search, so that each child costs O(e) edge visits: every step is
//! labeled once and its in- or out-edges are scanned once.

use alloc::vec::Vec;

use super::{ExtensionResult, Planner};
use crate::error::{Error, Result};
use crate::plan::{Plan, FINAL, INITIAL};
use crate::prop::Prop;
use crate::truth::{interacts, GoalEntry, InteractionMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Label {
    Unlabeled,
    New,
    Before,
    After,
}

struct Adjacency {
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
}

impl Adjacency {
    fn of(plan: &Plan) -> Self {
        let n = plan.n_steps();
        let mut out = alloc::vec![Vec::new(); n];
        let mut inc = alloc::vec![Vec::new(); n];
        for (a, b) in plan.edges() {
            out[a].push(b);
            inc[b].push(a);
        }
        Adjacency { out, inc }
    }
}

/// Labels `start` and every unlabeled step reachable from it (along
/// in-edges for `Before`, out-edges for `After`). Returns edge visits.
fn label_from(start: usize, label: Label, adj: &Adjacency, labels: &mut [Label]) -> usize {
    let next = if label == Label::Before { &adj.inc } else { &adj.out };
    let mut visits = 0;
    let mut stack = alloc::vec![start];
    labels[start] = label;
    while let Some(s) = stack.pop() {
        for &t in &next[s] {
            visits += 1;
            if labels[t] == Label::Unlabeled {
                labels[t] = label;
                stack.push(t);
            }
        }
    }
    visits
}

/// Last deleter of `c` before `needer` by backward search from the needer.
/// Returns it with the number of edges visited.
fn last_deleter_search(plan: &Plan, c: Prop, needer: usize) -> Result<(usize, usize)> {
    let adj = Adjacency::of(plan);
    let mut seen = 0u64;
    let mut deleters = 0u64;
    let mut visits = 0;
    let mut stack = alloc::vec![needer];
    while let Some(s) = stack.pop() {
        for &t in &adj.inc[s] {
            visits += 1;
            if seen >> t & 1 == 0 {
                seen |= 1 << t;
                if plan.step(t).effects.dels.contains(c) {
                    deleters |= 1 << t;
                }
                stack.push(t);
            }
        }
    }
    let mut last = None;
    let mut m = deleters;
    while m != 0 {
        let s = m.trailing_zeros() as usize;
        m &= m - 1;
        if plan.succs_mask(s) & deleters == 0 {
            if last.is_some() {
                return Err(Error::NoUniqueLastDeleter { prop: c.index(), needer });
            }
            last = Some(s);
        }
    }
    Ok((last.unwrap_or(INITIAL), visits))
}

struct Branching<'p> {
    adj: &'p Adjacency,
    new: usize,
    interacting: &'p [usize],
}

impl Branching<'_> {
    fn run(&self, plan: Plan, labels: Vec<Label>, k: usize, visits: usize, out: &mut Vec<(Plan, usize)>) {
        let mut k = k;
        while k < self.interacting.len() && labels[self.interacting[k]] != Label::Unlabeled {
            k += 1;
        }
        if k == self.interacting.len() {
            out.push((plan, visits));
            return;
        }
        let s = self.interacting[k];

        let mut before = plan.clone();
        if before.add_edge(s, self.new).is_ok() {
            let mut l = labels.clone();
            let v = label_from(s, Label::Before, self.adj, &mut l);
            self.run(before, l, k + 1, visits + v, out);
        }

        let mut after = plan;
        if after.add_edge(self.new, s).is_ok() {
            let mut l = labels;
            let v = label_from(s, Label::After, self.adj, &mut l);
            self.run(after, l, k + 1, visits + v, out);
        }
    }
}

impl Planner<'_> {
    pub(crate) fn ua_family(&self, plan: &Plan, goal: GoalEntry, pop_order: Option<&[usize]>) -> Result<ExtensionResult> {
        let GoalEntry { needer, condition: c } = goal;
        if needer >= plan.n_steps() {
            return Err(Error::UnknownStep(needer));
        }
        let mode = self.interaction_mode();
        let (del, base_visits) = last_deleter_search(plan, c, needer)?;
        let mut generated = Vec::new();
        for adder in self.adders_of(c) {
            let mut p = plan.clone();
            let new = p.push_step(self.new_step(&adder), self.config.step_ceiling)?;
            p.add_edge(del, new)?;
            p.add_edge(new, needer)?;
            p.add_edge(INITIAL, new)?;
            p.add_edge(new, FINAL)?;

            let adj = Adjacency::of(&p);
            let mut labels = alloc::vec![Label::Unlabeled; p.n_steps()];
            labels[new] = Label::New;
            let mut visits = base_visits;
            for dir in [Label::Before, Label::After] {
                let next = if dir == Label::Before { &adj.inc } else { &adj.out };
                for &t in &next[new] {
                    visits += 1;
                    if labels[t] == Label::Unlabeled {
                        visits += label_from(t, dir, &adj, &mut labels);
                    }
                }
            }

            let mut interacting: Vec<usize> = (0..new)
                .filter(|&s| labels[s] == Label::Unlabeled && interacts(&p, s, new, mode))
                .collect();
            if let Some(order) = pop_order {
                let mut reordered: Vec<usize> = order.iter().copied().filter(|s| interacting.contains(s)).collect();
                reordered.extend(interacting.iter().copied().filter(|s| !order.contains(s)));
                interacting = reordered;
            }
            let b = Branching { adj: &adj, new, interacting: &interacting };
            b.run(p, labels, 0, visits, &mut generated);
        }
        if mode == InteractionMode::Conditional {
            generated = self.select_roles_all(generated);
        }
        self.finish(plan, generated)
    }
}
