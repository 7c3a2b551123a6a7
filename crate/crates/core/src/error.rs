use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("instance needs at least two candidate locations, got {0}")]
    TooFewCandidates(usize),

    #[error("duplicate candidate location {0}")]
    DuplicateCandidate(f64),

    #[error("non-finite coordinate in {0}")]
    NonFinite(String),

    #[error("instance has no agents")]
    NoAgents,

    #[error("agent {0} approves neither facility")]
    NoApproval(usize),

    #[error("agent index {index} out of range for {len} agents")]
    AgentIndex { index: usize, len: usize },

    #[error("infeasible solution ({y1}, {y2}): {reason}")]
    InfeasibleSolution { y1: f64, y2: f64, reason: &'static str },

    #[error("{0} is not a candidate location")]
    NotACandidate(f64),

    #[error("no candidate left after exclusion")]
    EmptyCandidateSet,

    #[error("median of an empty agent set")]
    EmptyAgentSet,

    #[error("unknown mechanism id `{0}`")]
    UnknownMechanism(String),

    #[error("unknown objective `{0}` (expected sc or mc)")]
    UnknownObjective(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("generator gave up after {0} attempts to draw distinct candidates")]
    GeneratorExhausted(usize),
}
