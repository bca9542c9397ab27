use alloc::string::String;

/// Errors raised by the model, planners and analysis passes.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("operator `{operator}` deletes `{prop}` without requiring it (every deleted condition must be a precondition)")]
    DeleteNotPrecondition { operator: String, prop: String },
    #[error("operator `{operator}` conditionally deletes `{prop}`, which is not one of its dependency conditions")]
    ConditionalDeleteOutsideDeps { operator: String, prop: String },
    #[error("unknown step label {0}")]
    UnknownStep(usize),
    #[error("plan would have {steps} steps, above the step ceiling of {ceiling}")]
    StepCeiling { steps: usize, ceiling: usize },
    #[error("ordering {from} before {to} would create a cycle")]
    Cycle { from: usize, to: usize },
    #[error("plan is not totally ordered")]
    NotTotallyOrdered,
    #[error("no unique last deleter of proposition {prop} for step {needer}")]
    NoUniqueLastDeleter { prop: usize, needer: usize },
    #[error("plan has no open goals")]
    AlreadySolved,
    #[error("plan is not unambiguous")]
    Ambiguous,
    #[error("plan is not a solution")]
    NotASolution,
    #[error("node ceiling of {ceiling} exceeded ({count} nodes enumerated)")]
    NodeCeiling { ceiling: usize, count: usize },
    #[error("trees were built for different problems or planner configurations")]
    MismatchedTrees,
    #[error("invalid blocksworld configuration: {0}")]
    InvalidBlocks(String),
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("{0}")]
    Unsupported(&'static str),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
