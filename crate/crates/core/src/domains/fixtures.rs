//! Small named problems with known branching behavior, plus the plan node at
//! which each one's interesting extension happens.
//!
//! | name                  | what it shows                                        |
//! |-----------------------|------------------------------------------------------|
//! | `sussman`             | three blocks, interleaved goals, optimum 3           |
//! | `insertion_gaps`      | TO inserting into a 2-step chain: 3 children         |
//! | `interaction`         | UA ordering one interacting step: 2 children         |
//! | `ordering_preference` | one UA ordering leaves fewer false preconditions     |
//! | `conditional_roles`   | role selection marks or specializes a chain of cadds |
//! | `overlap`             | MT children sharing linearizations                   |
//! | `unsolvable`          | a goal nothing adds                                  |

use alloc::string::ToString;
use alloc::vec::Vec;

use super::blocksworld::{BlocksworldSpec, Config};
use crate::error::{Error, Result};
use crate::plan::{Plan, Step};
use crate::problem::{OperatorDraft, Problem, ProblemBuilder};

pub const FIXTURE_NAMES: [&str; 7] = [
    "sussman",
    "insertion_gaps",
    "interaction",
    "ordering_preference",
    "conditional_roles",
    "overlap",
    "unsolvable",
];

pub fn fixture(name: &str) -> Result<Problem> {
    match name {
        "sussman" => BlocksworldSpec {
            n_blocks: 3,
            // c on a; b on the table.
            initial: Config { stacks: alloc::vec![alloc::vec![0, 2], alloc::vec![1]] },
            goal: alloc::vec![(0, 1), (1, 2)],
            seed: 0,
        }
        .problem_named("sussman"),
        // A and B neutral with respect to c.
        "insertion_gaps" => ProblemBuilder::new(name)
            .goals(["a", "b", "c"])
            .operator(OperatorDraft::new("op_a").adds(["a"]))
            .operator(OperatorDraft::new("op_b").adds(["b"]))
            .operator(OperatorDraft::new("op_add").adds(["c"]))
            .build(),
        // op_add interacts with op_a through r; op_b is independent.
        "interaction" => ProblemBuilder::new(name)
            .init(["r"])
            .goals(["a", "b", "c"])
            .operator(OperatorDraft::new("op_a").pre(["r"]).adds(["a"]))
            .operator(OperatorDraft::new("op_b").adds(["b"]))
            .operator(OperatorDraft::new("op_add").adds(["c", "r"]))
            .build(),
        "ordering_preference" => ProblemBuilder::new(name)
            .goals(["g", "q"])
            .operator(OperatorDraft::new("o1").pre(["p"]).adds(["g"]))
            .operator(OperatorDraft::new("o2").adds(["q"]))
            .operator(OperatorDraft::new("o3").pre(["q"]).adds(["p"]))
            .build(),
        "conditional_roles" => ProblemBuilder::new(name)
            .init(["p", "t"])
            .goals(["q", "v", "w"])
            .operator(OperatorDraft::new("oa").pre(["p"]).adds(["q"]).cadd(["t"], "u"))
            .operator(OperatorDraft::new("ob").adds(["w"]).cadd(["u"], "s"))
            .operator(OperatorDraft::new("oc").pre(["s"]).adds(["v"]))
            .build(),
        "overlap" => ProblemBuilder::new(name)
            .goals(["g1", "g2", "g3"])
            .operator(OperatorDraft::new("o1").pre(["p1"]).adds(["g1", "p1", "p2", "p3"]))
            .operator(OperatorDraft::new("o2").pre(["p2"]).adds(["g2", "p1", "p2", "p3"]))
            .operator(OperatorDraft::new("o3").pre(["p3"]).adds(["g3", "p1", "p2", "p3"]))
            .build(),
        "unsolvable" => ProblemBuilder::new(name)
            .init(["a"])
            .goals(["b", "z"])
            .operator(OperatorDraft::new("make_b").pre(["a"]).adds(["b"]))
            .build(),
        _ => Err(Error::UnknownFixture(name.to_string())),
    }
}

/// The plan at which a fixture's characteristic extension happens, built
/// directly from the named library operators.
///
/// * `insertion_gaps`: `op_a ≺ op_b`, goal `c` open at the final step
/// * `interaction`: `op_a`, `op_b` unordered, goal `c` open
/// * `ordering_preference`: `o1`, `o2` unordered, `p` open at `o1`
/// * `conditional_roles`: `oa ≺ oc`, goals `w` (final) and `s` (at `oc`) open
/// * `overlap`: `o1`, `o2`, `o3` unordered, every `p_i` open
pub fn depicted_plan(name: &str, problem: &Problem) -> Result<Plan> {
    let (ops, edges): (&[&str], &[(usize, usize)]) = match name {
        "insertion_gaps" => (&["op_a", "op_b"], &[(2, 3)]),
        "interaction" => (&["op_a", "op_b"], &[]),
        "ordering_preference" => (&["o1", "o2"], &[]),
        "conditional_roles" => (&["oa", "oc"], &[(2, 3)]),
        "overlap" => (&["o1", "o2", "o3"], &[]),
        _ => return Err(Error::UnknownFixture(name.to_string())),
    };
    let mut steps: Vec<Step> = Plan::initial(problem).steps().to_vec();
    for op in ops {
        let i = problem.operator(op).ok_or_else(|| Error::UnknownFixture(op.to_string()))?;
        steps.push(Step::library(problem, i));
    }
    Plan::from_parts(steps, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::minimal_length;

    #[test]
    fn all_fixtures_build() {
        for n in FIXTURE_NAMES {
            fixture(n).unwrap();
        }
        assert!(matches!(fixture("nope"), Err(Error::UnknownFixture(_))));
    }

    #[test]
    fn oracle_lengths() {
        assert_eq!(minimal_length(&fixture("sussman").unwrap()).unwrap(), Some(3));
        assert_eq!(minimal_length(&fixture("insertion_gaps").unwrap()).unwrap(), Some(3));
        assert_eq!(minimal_length(&fixture("ordering_preference").unwrap()).unwrap(), Some(3));
        assert_eq!(minimal_length(&fixture("overlap").unwrap()).unwrap(), None);
        assert_eq!(minimal_length(&fixture("unsolvable").unwrap()).unwrap(), None);
    }
}
