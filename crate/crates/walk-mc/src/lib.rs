//! Monte Carlo walk sampling: the pivot chain for fixed-length
//! self-avoiding walks with exponent estimation, and a heavy-tailed
//! single-step sampler driven by the fractional Laplacian kernel.

mod longrange;
mod nu;
mod occupancy;
mod pivot;

pub use longrange::LongRangeStepper;
pub use nu::{estimate_nu, linear_fit, sample_r2, ChainSettings, LengthEstimate, NuEstimate};
pub use pivot::{walk_step_key, PivotWalk, SignedPermutation, MAX_DIM};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum WalkError {
    #[error("dimension {dim} outside supported range 1..={max}")]
    BadDimension { dim: usize, max: usize },
    #[error("walk length {0} outside supported range 2..=2000")]
    BadLength(usize),
    #[error("chain mixing failure: {accepted} accepted of {proposals} proposals at n={n}")]
    MixingFailure {
        n: usize,
        accepted: usize,
        proposals: usize,
    },
    #[error("exponent fit needs at least {min} lengths, got {got}")]
    TooFewLengths { min: usize, got: usize },
    #[error("truncated tail mass {tail:.3e} exceeds tolerance {tol:.3e}; enlarge radius or period")]
    TailMass { tail: f64, tol: f64 },
    #[error("step weights outside tolerance: {0}")]
    BadKernel(String),
    #[error("invalid sampler geometry: {0}")]
    BadGeometry(String),
    #[error(transparent)]
    Lattice(#[from] lattice_core::LatticeError),
}

pub type Result<T> = std::result::Result<T, WalkError>;
