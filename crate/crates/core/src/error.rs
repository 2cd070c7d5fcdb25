use thiserror::Error;

/// Errors raised by the exact engines and the constructors built on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("beta must be a non-integer greater than 1 (got {0})")]
    NonIntegerRequired(String),

    #[error("orbit unresolved after {max_steps} steps")]
    UnresolvedOrbit { max_steps: usize },

    #[error("root iteration did not converge: {0}")]
    NonConvergence(String),

    #[error("digit hypotheses violated: {0}")]
    HypothesisViolated(String),

    #[error("construction failed: {0}")]
    ConstructionFailed(String),

    #[error("sequence is not Parry-admissible")]
    NotAdmissible,

    #[error("no sign change on (-1, 0): f(-1) = {f_at_minus_one} >= 0, increase the block count")]
    NoSignChange { f_at_minus_one: String },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
