//! Linearizations, plan equivalence, subplans and compactness.
//!
//! Equivalence is a bijection search restricted to same-instance groups.
//! The worst case is exponential in the size of the largest group; plans
//! here stay at desk scale (a dozen steps or so).

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::plan::{Plan, FINAL, INITIAL};
use crate::problem::Problem;
use crate::truth;

/// Calls `f` with every topological order of the plan, in lexicographic
/// order of labels. Stops early if `f` breaks.
pub fn for_each_linearization<F>(plan: &Plan, mut f: F) -> ControlFlow<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    let n = plan.n_steps();
    let mut seq = Vec::with_capacity(n);
    walk(plan, n, 0, &mut seq, &mut f)
}

fn walk<F>(plan: &Plan, n: usize, placed: u64, seq: &mut Vec<usize>, f: &mut F) -> ControlFlow<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    if seq.len() == n {
        return f(seq);
    }
    for s in 0..n {
        if placed >> s & 1 == 0 && plan.preds_mask(s) & !placed == 0 {
            seq.push(s);
            walk(plan, n, placed | 1 << s, seq, f)?;
            seq.pop();
        }
    }
    ControlFlow::Continue(())
}

/// Every linearization as a step sequence.
pub fn linearization_sequences(plan: &Plan) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let _ = for_each_linearization(plan, |s| {
        out.push(s.to_vec());
        ControlFlow::Continue(())
    });
    out
}

/// Every linearization as a totally ordered plan over the same steps.
pub fn linearizations(plan: &Plan) -> Vec<Plan> {
    linearization_sequences(plan)
        .iter()
        .map(|s| plan.with_total_order(s))
        .collect()
}

/// Number of linear extensions, by dynamic programming over placed-step sets.
pub fn count_linearizations(plan: &Plan) -> u128 {
    fn go(plan: &Plan, placed: u64, full: u64, memo: &mut BTreeMap<u64, u128>) -> u128 {
        if placed == full {
            return 1;
        }
        if let Some(&c) = memo.get(&placed) {
            return c;
        }
        let mut total = 0;
        let mut rest = full & !placed;
        while rest != 0 {
            let s = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if plan.preds_mask(s) & !placed == 0 {
                total += go(plan, placed | 1 << s, full, memo);
            }
        }
        memo.insert(placed, total);
        total
    }
    go(plan, 0, plan.all_mask(), &mut BTreeMap::new())
}

/// Searches for a bijection `f` from `a`'s steps to `b`'s steps mapping
/// each step to a same-instance step. `exact` demands that `x ≺ y` iff
/// `f(x) ≺ f(y)`; otherwise only `x ≺ y ⇒ f(x) ≺ f(y)` is required.
fn find_bijection(a: &Plan, b: &Plan, exact: bool) -> Option<Vec<usize>> {
    let n = a.n_steps();
    if n != b.n_steps() {
        return None;
    }
    let identity_ok = (0..n).all(|i| a.step(i).same_instance(b.step(i)))
        && (0..n).all(|i| {
            let (pa, pb) = (a.preds_mask(i), b.preds_mask(i));
            if exact {
                pa == pb
            } else {
                pa & !pb == 0
            }
        });
    if identity_ok {
        return Some((0..n).collect());
    }
    // Candidate lists per step; fail fast on mismatched instance multisets.
    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| a.step(i).same_instance(b.step(j))).collect())
        .collect();
    if candidates.iter().any(Vec::is_empty) {
        return None;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| candidates[i].len());
    let mut map = alloc::vec![usize::MAX; n];
    let mut used = 0u64;

    #[allow(clippy::too_many_arguments)]
    fn assign(
        k: usize,
        order: &[usize],
        cands: &[Vec<usize>],
        a: &Plan,
        b: &Plan,
        exact: bool,
        map: &mut Vec<usize>,
        used: &mut u64,
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let x = order[k];
        for &y in &cands[x] {
            if *used >> y & 1 == 1 {
                continue;
            }
            let consistent = order[..k].iter().all(|&z| {
                let fz = map[z];
                let fwd = |p: bool, q: bool| if exact { p == q } else { !p || q };
                fwd(a.precedes(z, x), b.precedes(fz, y)) && fwd(a.precedes(x, z), b.precedes(y, fz))
            });
            if !consistent {
                continue;
            }
            map[x] = y;
            *used |= 1 << y;
            if assign(k + 1, order, cands, a, b, exact, map, used) {
                return true;
            }
            *used &= !(1 << y);
            map[x] = usize::MAX;
        }
        false
    }

    if assign(0, &order, &candidates, a, b, exact, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

/// Plan equivalence: a same-instance bijection preserving the order in both
/// directions.
pub fn equivalent(p1: &Plan, p2: &Plan) -> bool {
    find_bijection(p1, p2, true).is_some()
}

/// `t` is totally ordered and equivalent to some total order containing
/// `u`'s order.
pub fn is_linearization(t: &Plan, u: &Plan) -> bool {
    t.is_totally_ordered() && find_bijection(u, t, false).is_some()
}

/// `p1` is equivalent to `p2` restricted to a subset of its steps that keeps
/// the initial and final steps.
pub fn is_subplan(p1: &Plan, p2: &Plan) -> bool {
    let (n1, n2) = (p1.n_steps(), p2.n_steps());
    if n1 > n2 || n1 < 2 {
        return false;
    }
    let middle: Vec<usize> = (2..n2).collect();
    let need = n1 - 2;
    let mut found = false;
    let _ = for_each_subset(&middle, need, &mut |mask| {
        let keep = mask | 1 << INITIAL | 1 << FINAL;
        if equivalent(p1, &p2.restrict(keep)) {
            found = true;
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    });
    found
}

fn for_each_subset<F: FnMut(u64) -> ControlFlow<()>>(items: &[usize], k: usize, f: &mut F) -> ControlFlow<()> {
    fn rec<F: FnMut(u64) -> ControlFlow<()>>(items: &[usize], k: usize, acc: u64, f: &mut F) -> ControlFlow<()> {
        if k == 0 {
            return f(acc);
        }
        if items.len() < k {
            return ControlFlow::Continue(());
        }
        rec(&items[1..], k - 1, acc | 1 << items[0], f)?;
        rec(&items[1..], k, acc, f)
    }
    rec(items, k, 0, f)
}

/// A solution none of whose strict subplans is a solution. Solutions are
/// judged by necessary truth over all linearizations.
pub fn is_compact_solution(plan: &Plan, problem: &Problem) -> Result<bool> {
    let _ = problem;
    if !truth::is_solution(plan) {
        return Err(Error::NotASolution);
    }
    let middle: Vec<usize> = (2..plan.n_steps()).collect();
    for k in 0..middle.len() {
        let mut hit = false;
        let _ = for_each_subset(&middle, k, &mut |mask| {
            if truth::is_solution(&plan.restrict(mask | 1 << INITIAL | 1 << FINAL)) {
                hit = true;
                return ControlFlow::Break(());
            }
            ControlFlow::Continue(())
        });
        if hit {
            return Ok(false);
        }
    }
    Ok(true)
}
