use thiserror::Error;

use crate::exponents::ExponentResult;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("box-packing constant b = {b} is smaller than the dimension d = {d}")]
    PackingBelowDimension { b: String, d: u32 },

    #[error("the embedding is not compact")]
    NotCompact,

    #[error("no verification possible: predicted exponent is {0}")]
    Untestable(ExponentResult),

    #[error("weights must be sorted nonincreasing (violated at index {0})")]
    Unsorted(usize),

    #[error("need at least {needed} usable points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("too few levels for a packing fit: {0}")]
    TooFewLevels(String),

    #[error("level {level} exceeds the predicate depth limit {max_depth}")]
    DepthExceeded { level: u32, max_depth: u32 },

    #[error("packing condition (b_j) fails: ratios span [{min}, {max}]")]
    PackingCondition { min: f64, max: f64 },

    #[error("value does not fit: {0}")]
    Overflow(String),

    #[error("domain description, line {line}: {reason}")]
    DomainFile { line: usize, reason: String },

    #[error(
        "exponent tables disagree on {context}: sequence table {beta}, function table {gamma}"
    )]
    TableMismatch {
        context: String,
        beta: String,
        gamma: String,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
