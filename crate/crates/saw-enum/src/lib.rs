//! Exact enumeration of self-avoiding walks on `Z^d` and estimators built
//! on the resulting counts.

mod enumerate;
mod estimates;
mod golden;

pub use enumerate::{enumerate_saw, enumerate_saw_unreduced, EnumerationResult};
pub use estimates::{
    check_submultiplicative, connective_estimates, growth_bound_margins, BoundMargin,
    ConnectiveEstimates, SubmultiplicativityViolation,
};
pub use golden::{cubic_counts, CUBIC_COUNTS_CSV};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum EnumError {
    #[error("dimension {0} out of supported range 1..=5")]
    BadDimension(usize),
    #[error("walk length {0} must be at least 1")]
    BadLength(usize),
    #[error("walk length {len} too large for dimension {dim} (coordinate packing limit)")]
    LengthOverflow { dim: usize, len: usize },
    #[error("count accumulator overflow at n = {0}")]
    CountOverflow(usize),
}

pub type Result<T> = std::result::Result<T, EnumError>;
