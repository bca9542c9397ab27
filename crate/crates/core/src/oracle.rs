//! Forward breadth-first search over world states. Shares nothing with the
//! plan-space code beyond the problem representation, so it serves as an
//! independent check on minimal solution lengths.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::problem::Problem;
use crate::prop::State;

pub const DEFAULT_STATE_CEILING: usize = 1_000_000;

/// A shortest operator sequence (library indices) reaching the goals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shortest {
    pub length: usize,
    pub operators: Vec<usize>,
    pub states_visited: usize,
}

/// `None` if the goals are unreachable; an error if more than `ceiling`
/// states would be stored. Conditional effects are ignored.
pub fn shortest_solution(problem: &Problem, ceiling: usize) -> Result<Option<Shortest>> {
    let mut start = State::empty(problem.n_props());
    for p in problem.init().iter() {
        start.set(p);
    }
    // state -> (predecessor, operator)
    let mut seen: BTreeMap<State, Option<(State, usize)>> = BTreeMap::new();
    seen.insert(start.clone(), None);
    let mut queue = VecDeque::from([start]);
    while let Some(s) = queue.pop_front() {
        if s.contains_all(problem.goals()) {
            let mut operators = Vec::new();
            let mut cur = s;
            while let Some(Some((prev, op))) = seen.get(&cur) {
                operators.push(*op);
                cur = prev.clone();
            }
            operators.reverse();
            return Ok(Some(Shortest { length: operators.len(), operators, states_visited: seen.len() }));
        }
        for (i, op) in problem.library().iter().enumerate() {
            let e = &op.effects;
            if !s.contains_all(&e.pre) {
                continue;
            }
            let mut t = s.clone();
            for p in e.dels.iter() {
                t.clear(p);
            }
            for p in e.adds.iter() {
                t.set(p);
            }
            if !seen.contains_key(&t) {
                if seen.len() >= ceiling {
                    return Err(Error::NodeCeiling { ceiling, count: seen.len() });
                }
                seen.insert(t.clone(), Some((s.clone(), i)));
                queue.push_back(t);
            }
        }
    }
    Ok(None)
}

/// Minimal solution length, if any.
pub fn minimal_length(problem: &Problem) -> Result<Option<usize>> {
    Ok(shortest_solution(problem, DEFAULT_STATE_CEILING)?.map(|s| s.length))
}
