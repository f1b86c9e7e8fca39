use thiserror::Error;

/// Errors surfaced by the engine. Analysis verdicts that are merely
/// inconclusive are not errors; they are reported through verdict types.
#[derive(Debug, Error)]
pub enum FimError {
    #[error("shape arity mismatch: expected {expected} factors, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("injection is not well formed: {0}")]
    BadInjection(String),

    #[error("injections are not composable: inner codomain {inner} != outer domain {outer}")]
    NotComposable { inner: String, outer: String },

    #[error("shape {shape} lies outside the box {bound}")]
    OutsideBox { shape: String, bound: String },

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("matrix dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("padding a partition of {weight} with first part {first} requires t >= {needed}, got {got}")]
    PaddingRange {
        weight: usize,
        first: usize,
        needed: usize,
        got: usize,
    },

    #[error("group action violates a defining relation: {0}")]
    BadGroupAction(String),

    #[error("presentation is invalid: {0}")]
    BadPresentation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("operation requires characteristic zero, field is {0}")]
    NeedsCharZero(String),

    #[error("box too small: {0}")]
    BoxTooSmall(String),

    #[error("module axiom violated: {0}")]
    AxiomViolation(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, FimError>;
