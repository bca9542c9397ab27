//! The D¹S¹ domain: fifteen operators `O_i` with precondition `i_i`, add
//! `g_i` and delete `i_{i-1}`. Initial state `{i_1..i_15}`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::problem::{OperatorDraft, Problem, ProblemBuilder};

pub const D1S1_SIZE: usize = 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct D1s1Options {
    /// Add `i_{i-1}` to the preconditions of `O_i`, so that every deleted
    /// condition is also required. Without it the operators break the
    /// language convention and the problem is built unchecked.
    pub deletes_required: bool,
    /// Give `O_1` a dummy `i_0` (initially true) to delete.
    pub dummy_i0: bool,
}

impl Default for D1s1Options {
    fn default() -> Self {
        D1s1Options { deletes_required: true, dummy_i0: false }
    }
}

/// D¹S¹ problem with goals `{g_i | i ∈ goal_indices}` (indices 1..=15).
pub fn d1s1_problem(goal_indices: &[usize], opts: D1s1Options) -> Result<Problem> {
    if goal_indices.is_empty() || goal_indices.iter().any(|&i| i == 0 || i > D1S1_SIZE) {
        return Err(Error::Unsupported("D1S1 goal indices must be a nonempty subset of 1..=15"));
    }
    let name: Vec<String> = goal_indices.iter().map(|i| format!("{i}")).collect();
    let mut b = ProblemBuilder::new(format!("d1s1_{}", name.join("_")));
    let lo = if opts.dummy_i0 { 0 } else { 1 };
    b = b.init((lo..=D1S1_SIZE).map(|i| format!("i{i}")));
    b = b.goals(goal_indices.iter().map(|i| format!("g{i}")));
    for i in 1..=D1S1_SIZE {
        let mut op = OperatorDraft::new(format!("o{i}")).pre([format!("i{i}")]).adds([format!("g{i}")]);
        if i > 1 || opts.dummy_i0 {
            let prev = format!("i{}", i - 1);
            if opts.deletes_required {
                op = op.pre([prev.clone()]);
            }
            op = op.dels([prev]);
        }
        b.push_operator(op);
    }
    if opts.deletes_required {
        b.build()
    } else {
        Ok(b.build_unchecked())
    }
}
