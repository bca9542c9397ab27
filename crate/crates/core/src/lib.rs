//! Plan-space planners over a STRIPS-style language, with the machinery to
//! compare their search trees: truth criteria, linearizations, search
//! strategies and the correspondence between partial-order and total-order
//! derivation trees.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats and the command
//! line live in the `poplab` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod correspondence;
pub mod domains;
pub mod error;
pub mod linearize;
pub mod oracle;
pub mod plan;
pub mod planners;
pub mod problem;
pub mod prop;
pub mod search;
pub mod truth;

pub use error::{Error, Result};
pub use plan::{Plan, Relation, SchemaRef, Step, FINAL, INITIAL};
pub use planners::{Child, ExtensionResult, GoalSelection, Planner, PlannerConfig, PlannerKind};
pub use problem::{Conditional, Effects, OperatorDraft, OperatorSchema, Problem, ProblemBuilder};
pub use prop::{Prop, PropSet, State};
pub use truth::{GoalEntry, ModalStatus, Semantics};
