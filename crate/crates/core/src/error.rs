use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arity mismatch: expected {expected} variables, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("point {point} does not lie on {expected}")]
    NotOnVariety { point: String, expected: String },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("commuting subalgebra does not normalize the coinvariant subalgebra")]
    NotNormalizing,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("bound {bound} too small: {reason}")]
    BoundTooSmall { bound: usize, reason: String },

    #[error("no dominating level exists for constraints {0:?}")]
    NoDominatingLevel(Vec<Vec<i64>>),

    #[error("characteristic polynomial does not split over Q")]
    NotSplit,
}

pub type Result<T> = std::result::Result<T, Error>;
