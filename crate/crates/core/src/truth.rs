//! Truth of preconditions in totally and partially ordered plans.
//!
//! Only unconditional adds and deletes make anything true or false;
//! conditional effects stay inert until a step is specialized.

use alloc::vec::Vec;
use core::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::linearize::for_each_linearization;
use crate::plan::{Plan, INITIAL};
use crate::prop::{Prop, PropSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModalStatus {
    NecessarilyTrue,
    NecessarilyFalse,
    Ambiguous,
}

/// Precondition `condition` of step `needer`. Orders by needer label, then
/// by proposition name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GoalEntry {
    pub needer: usize,
    pub condition: Prop,
}

/// Which preconditions count as open goals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Semantics {
    /// False preconditions of a totally ordered plan.
    TotalOrder,
    /// Necessarily false preconditions of an unambiguous plan.
    Unambiguous,
    /// Preconditions that are not necessarily true.
    Modal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InteractionMode {
    Basic,
    /// Dependency conditions count as preconditions and conditional effects
    /// as effects.
    Conditional,
}

/// Every precondition entry of the plan in goal order.
pub fn preconditions(plan: &Plan) -> Vec<GoalEntry> {
    let mut out = Vec::new();
    for (needer, step) in plan.steps().iter().enumerate() {
        for condition in step.effects.pre.iter() {
            out.push(GoalEntry { needer, condition });
        }
    }
    out
}

/// Forward simulation along `seq`; calls `f(needer, condition, holds)` for
/// every precondition. Deletes apply before adds.
fn simulate<F: FnMut(usize, Prop, bool)>(plan: &Plan, seq: &[usize], mut f: F) {
    let mut state: Vec<Prop> = Vec::new();
    for &s in seq {
        let e = &plan.step(s).effects;
        for p in e.pre.iter() {
            f(s, p, state.contains(&p));
        }
        state.retain(|p| !e.dels.contains(*p));
        for p in e.adds.iter() {
            if !state.contains(&p) {
                state.push(p);
            }
        }
    }
}

/// Truth of `c` at `needer` in a totally ordered plan: added by an earlier
/// step and not deleted by an intervening one.
pub fn true_in_total_order(plan: &Plan, needer: usize, c: Prop) -> Result<bool> {
    let seq = plan.total_order().ok_or(Error::NotTotallyOrdered)?;
    if needer >= plan.n_steps() {
        return Err(Error::UnknownStep(needer));
    }
    Ok(true_in_sequence(plan, &seq, needer, c))
}

/// Backward scan from `needer` along `seq` for the closest step that adds or
/// deletes `c`.
pub fn true_in_sequence(plan: &Plan, seq: &[usize], needer: usize, c: Prop) -> bool {
    let pos = seq.iter().position(|&s| s == needer).expect("needer in sequence");
    for &s in seq[..pos].iter().rev() {
        let e = &plan.step(s).effects;
        if e.adds.contains(c) {
            return true;
        }
        if e.dels.contains(c) {
            return false;
        }
    }
    false
}

/// Modal status of every precondition, by evaluating every linearization.
pub fn precondition_statuses(plan: &Plan) -> Vec<(GoalEntry, ModalStatus)> {
    let entries = preconditions(plan);
    let index = |needer: usize, c: Prop| {
        entries
            .binary_search(&GoalEntry { needer, condition: c })
            .expect("precondition entry")
    };
    let mut seen_true = alloc::vec![false; entries.len()];
    let mut seen_false = alloc::vec![false; entries.len()];
    let _ = for_each_linearization(plan, |seq| {
        simulate(plan, seq, |s, p, holds| {
            let i = index(s, p);
            if holds {
                seen_true[i] = true;
            } else {
                seen_false[i] = true;
            }
        });
        if seen_true.iter().zip(&seen_false).all(|(t, f)| *t && *f) {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    entries
        .into_iter()
        .enumerate()
        .map(|(i, e)| {
            let status = match (seen_true[i], seen_false[i]) {
                (true, true) => ModalStatus::Ambiguous,
                (true, false) => ModalStatus::NecessarilyTrue,
                _ => ModalStatus::NecessarilyFalse,
            };
            (e, status)
        })
        .collect()
}

/// Modal status over all linearizations (the exact, exponential oracle).
pub fn modal_status(plan: &Plan, needer: usize, c: Prop) -> ModalStatus {
    let (mut t, mut f) = (false, false);
    let _ = for_each_linearization(plan, |seq| {
        if true_in_sequence(plan, seq, needer, c) {
            t = true;
        } else {
            f = true;
        }
        if t && f {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    match (t, f) {
        (true, true) => ModalStatus::Ambiguous,
        (true, false) => ModalStatus::NecessarilyTrue,
        _ => ModalStatus::NecessarilyFalse,
    }
}

/// Modal status read off one arbitrary linearization. Only meaningful for
/// unambiguous plans, where it agrees with [`modal_status`].
pub fn modal_status_unambiguous(plan: &Plan, needer: usize, c: Prop) -> ModalStatus {
    let (seq, _) = plan.topological_order();
    if true_in_sequence(plan, &seq, needer, c) {
        ModalStatus::NecessarilyTrue
    } else {
        ModalStatus::NecessarilyFalse
    }
}

pub fn is_unambiguous(plan: &Plan) -> bool {
    if plan.is_totally_ordered() {
        return true;
    }
    precondition_statuses(plan)
        .iter()
        .all(|(_, s)| *s != ModalStatus::Ambiguous)
}

/// Every precondition necessarily true.
pub fn is_solution(plan: &Plan) -> bool {
    precondition_statuses(plan)
        .iter()
        .all(|(_, s)| *s == ModalStatus::NecessarilyTrue)
}

/// Open goals plus the number of step/edge visits spent computing them.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GoalSet {
    pub entries: Vec<GoalEntry>,
    pub visits: usize,
}

pub fn goal_set(plan: &Plan, semantics: Semantics) -> Result<GoalSet> {
    let mut entries = Vec::new();
    let visits = match semantics {
        Semantics::TotalOrder => {
            let seq = plan.total_order().ok_or(Error::NotTotallyOrdered)?;
            simulate(plan, &seq, |s, p, holds| {
                if !holds {
                    entries.push(GoalEntry { needer: s, condition: p });
                }
            });
            seq.len()
        }
        Semantics::Unambiguous => {
            let (seq, visits) = plan.topological_order();
            simulate(plan, &seq, |s, p, holds| {
                if !holds {
                    entries.push(GoalEntry { needer: s, condition: p });
                }
            });
            visits + seq.len()
        }
        Semantics::Modal => {
            entries = precondition_statuses(plan)
                .into_iter()
                .filter(|(_, s)| *s != ModalStatus::NecessarilyTrue)
                .map(|(e, _)| e)
                .collect();
            0
        }
    };
    entries.sort_unstable();
    Ok(GoalSet { entries, visits })
}

/// The deleter of `c` before `needer` with no other deleter of `c` between
/// them; the initial step if nothing before `needer` deletes `c`.
pub fn last_deleter(plan: &Plan, c: Prop, needer: usize) -> Result<usize> {
    if needer >= plan.n_steps() {
        return Err(Error::UnknownStep(needer));
    }
    let deleters: u64 = (0..plan.n_steps())
        .filter(|&s| plan.precedes(s, needer) && plan.step(s).effects.dels.contains(c))
        .fold(0, |m, s| m | 1 << s);
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
    Ok(last.unwrap_or(INITIAL))
}

struct Footprint {
    pre: PropSet,
    adds: PropSet,
    dels: PropSet,
}

fn footprint(plan: &Plan, s: usize, mode: InteractionMode) -> Footprint {
    let e = &plan.step(s).effects;
    match mode {
        InteractionMode::Basic => Footprint { pre: e.pre.clone(), adds: e.adds.clone(), dels: e.dels.clone() },
        InteractionMode::Conditional => {
            let deps: PropSet = e
                .cadds
                .iter()
                .chain(e.cdels.iter())
                .flat_map(|c| c.deps.iter())
                .collect();
            Footprint {
                pre: e.pre.union(&deps),
                adds: e.adds.union(&e.cadds.iter().map(|c| c.effect).collect()),
                dels: e.dels.union(&e.cdels.iter().map(|c| c.effect).collect()),
            }
        }
    }
}

/// Two unordered steps interact when one's precondition is added or deleted
/// by the other, or one adds what the other deletes.
pub fn interacts(plan: &Plan, s1: usize, s2: usize, mode: InteractionMode) -> bool {
    if s1 == s2 || plan.ordered(s1, s2) {
        return false;
    }
    let (a, b) = (footprint(plan, s1, mode), footprint(plan, s2, mode));
    a.pre.intersects(&b.adds)
        || a.pre.intersects(&b.dels)
        || b.pre.intersects(&a.adds)
        || b.pre.intersects(&a.dels)
        || a.adds.intersects(&b.dels)
        || b.adds.intersects(&a.dels)
}
