//! Modal-truth extension: establish a goal with a new or existing step, then
//! resolve every threat by demotion or by a white knight.

use alloc::vec::Vec;

use super::{ExtensionResult, Planner};
use crate::error::{Error, Result};
use crate::plan::{Plan, FINAL, INITIAL};
use crate::prop::Prop;
use crate::truth::GoalEntry;

/// First step (by label) that deletes `c`, may fall between `add` and
/// `need`, and has no adder of `c` necessarily between it and `need`.
fn unresolved_threat(plan: &Plan, add: usize, need: usize, c: Prop) -> Option<usize> {
    let n = plan.n_steps();
    (0..n).find(|&x| {
        x != add
            && x != need
            && plan.step(x).effects.dels.contains(c)
            && !plan.precedes(x, add)
            && !plan.precedes(need, x)
            && !(0..n).any(|k| {
                k != x && plan.precedes(x, k) && plan.precedes(k, need) && plan.step(k).effects.adds.contains(c)
            })
    })
}

fn resolve(plan: Plan, add: usize, need: usize, c: Prop, visits: usize, out: &mut Vec<(Plan, usize)>) {
    let Some(x) = unresolved_threat(&plan, add, need, c) else {
        out.push((plan, visits));
        return;
    };
    let visits = visits + plan.n_steps();

    // Demotion: the threat moves after the needer.
    if !plan.precedes(x, need) {
        let mut p = plan.clone();
        if p.add_edge(need, x).is_ok() {
            resolve(p, add, need, c, visits, out);
        }
    }
    // White knights: an adder of `c` placed between the threat and the needer.
    for k in 0..plan.n_steps() {
        if k == x || k == need || !plan.step(k).effects.adds.contains(c) {
            continue;
        }
        if plan.precedes(k, x) || plan.precedes(need, k) {
            continue;
        }
        let mut p = plan.clone();
        if p.add_edge(x, k).is_ok() && p.add_edge(k, need).is_ok() {
            resolve(p, add, need, c, visits, out);
        }
    }
}

impl Planner<'_> {
    pub(crate) fn mt_extend(&self, plan: &Plan, goal: GoalEntry) -> Result<ExtensionResult> {
        let GoalEntry { needer, condition: c } = goal;
        if needer >= plan.n_steps() {
            return Err(Error::UnknownStep(needer));
        }
        let mut generated = Vec::new();
        // Reuse of existing steps that may come before the needer.
        for s in 0..plan.n_steps() {
            if s != needer && plan.possibly_before(s, needer) && plan.step(s).effects.adds.contains(c) {
                let mut p = plan.clone();
                p.add_edge(s, needer)?;
                resolve(p, s, needer, c, 0, &mut generated);
            }
        }
        for adder in self.adders_of(c) {
            let mut p = plan.clone();
            let new = p.push_step(self.new_step(&adder), self.config.step_ceiling)?;
            p.add_edge(INITIAL, new)?;
            p.add_edge(new, FINAL)?;
            p.add_edge(new, needer)?;
            resolve(p, new, needer, c, 0, &mut generated);
        }
        self.finish(plan, generated)
    }
}
