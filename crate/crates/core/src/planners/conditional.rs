//! Specialization of conditional steps and role selection.

use alloc::sync::Arc;
use alloc::vec::Vec;

use super::Planner;
use crate::plan::{Plan, Step};
use crate::problem::{Conditional, Effects};
use crate::prop::PropSet;

/// Which conditional effects `specialize` promotes to unconditional ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum SubsetMode {
    /// Effects whose dependency set is a subset of, or equal to, `D`.
    #[default]
    NonStrict,
    /// Effects whose dependency set is a proper subset of `D`.
    Strict,
}

impl SubsetMode {
    fn promotes(self, deps: &PropSet, d: &PropSet) -> bool {
        match self {
            SubsetMode::NonStrict => deps.is_subset(d),
            SubsetMode::Strict => deps.is_subset(d) && deps.len() < d.len(),
        }
    }
}

/// `specialize(O, D)` with non-strict subsets.
pub fn specialize(e: &Effects, d: &PropSet) -> Effects {
    specialize_with(e, d, SubsetMode::NonStrict)
}

/// Adds `D` to the preconditions, makes the conditional effects enabled by
/// `D` unconditional and strips `D` from the dependency sets of the rest.
pub fn specialize_with(e: &Effects, d: &PropSet, mode: SubsetMode) -> Effects {
    let mut adds = e.adds.clone();
    let mut dels = e.dels.clone();
    let residual = |cs: &[Conditional], promoted: &mut PropSet| -> Vec<Conditional> {
        let mut rest = Vec::new();
        for c in cs {
            if mode.promotes(&c.deps, d) {
                promoted.insert(c.effect);
            } else {
                rest.push(Conditional { deps: c.deps.difference(d), effect: c.effect, marked: c.marked });
            }
        }
        rest
    };
    let cadds = residual(&e.cadds, &mut adds);
    let cdels = residual(&e.cdels, &mut dels);
    Effects { pre: e.pre.union(d), adds, dels, cadds, cdels }
}

/// Finds the first conditional add (by step label, then entry index) that
/// is unmarked and reaches some step needing its effect: the user comes
/// necessarily after it and no unconditional deleter of the effect is
/// necessarily between them.
pub(crate) fn pending_role(plan: &Plan) -> Option<(usize, usize)> {
    let n = plan.n_steps();
    for s in 0..n {
        for (k, c) in plan.step(s).effects.cadds.iter().enumerate() {
            if c.marked {
                continue;
            }
            let used = (0..n).any(|u| {
                plan.precedes(s, u)
                    && plan.step(u).effects.pre.contains(c.effect)
                    && !(0..n).any(|x| {
                        plan.precedes(s, x) && plan.precedes(x, u) && plan.step(x).effects.dels.contains(c.effect)
                    })
            });
            if used {
                return Some((s, k));
            }
        }
    }
    None
}

impl Planner<'_> {
    /// Role selection: until no conditional add is pending, branch on
    /// marking it (declining the role) or specializing its step on it.
    pub(crate) fn select_roles(&self, plan: Plan, step4: usize, out: &mut Vec<(Plan, usize)>) {
        let Some((s, k)) = pending_role(&plan) else {
            out.push((plan, step4));
            return;
        };
        let step = plan.step(s).clone();

        let mut marked = (*step.effects).clone();
        marked.cadds[k].marked = true;
        let mut p = plan.clone();
        p.replace_step(s, Step { schema: step.schema, effects: Arc::new(marked) });
        self.select_roles(p, step4, out);

        let deps = step.effects.cadds[k].deps.clone();
        let specialized = specialize_with(&step.effects, &deps, self.config.subset_mode);
        let mut p = plan;
        p.replace_step(s, Step { schema: step.schema, effects: Arc::new(specialized) });
        self.select_roles(p, step4, out);
    }

    pub(crate) fn select_roles_all(&self, generated: Vec<(Plan, usize)>) -> Vec<(Plan, usize)> {
        let mut out = Vec::with_capacity(generated.len());
        for (plan, step4) in generated {
            self.select_roles(plan, step4, &mut out);
        }
        out
    }
}
