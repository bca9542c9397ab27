use alloc::vec::Vec;

use super::Planner;
use crate::error::{Error, Result};
use crate::plan::Plan;
use crate::truth::GoalEntry;

use super::ExtensionResult;

impl Planner<'_> {
    /// TO and TO-C: for each adder, one child per gap between the last
    /// deleter of the goal and its needer, walking backward from the needer.
    pub(crate) fn to_family(&self, plan: &Plan, goal: GoalEntry) -> Result<ExtensionResult> {
        let seq = plan.total_order().ok_or(Error::NotTotallyOrdered)?;
        let GoalEntry { needer, condition: c } = goal;
        let pos_need = seq.iter().position(|&s| s == needer).ok_or(Error::UnknownStep(needer))?;
        let mut generated: Vec<(Plan, usize)> = Vec::new();
        for adder in self.adders_of(c) {
            let mut i = pos_need;
            // Each gap is reached by one backward move plus the deleter test.
            while i > 0 {
                let (before, after) = (seq[i - 1], seq[i]);
                let mut child = plan.derive(generated.len());
                let s = child.push_step(self.new_step(&adder), self.config.step_ceiling)?;
                child.split_edge(before, after, s)?;
                generated.push((child, 2));
                if plan.step(before).effects.dels.contains(c) {
                    break;
                }
                i -= 1;
            }
        }
        if self.interaction_mode() == crate::truth::InteractionMode::Conditional {
            generated = self.select_roles_all(generated);
        }
        self.finish(plan, generated)
    }
}
