//! Gaussian fields with covariance ((-lap)^(alpha/2) + m^2)^(-1).
//!
//! The covariance is diagonal in Fourier space, which gives four things
//! almost for free: the kernel row by inverse transform, a scale
//! decomposition C = C_1 + ... + C_N by slicing the multipliers with a
//! smooth dyadic partition of unity, exact spectral sampling, and the
//! flow coefficients beta_j built from the accumulated kernels
//! w_k = C_1 + ... + C_k via Parseval sums streamed over modes.
//!
//! Exact polynomial expectations (pairings) live here too; they back the
//! polymer and quartic-model tests with machine-precision oracles.

mod beta;
mod covariance;
mod decompose;
mod sample;
mod wick;

pub use beta::{beta_table, BetaTable};
pub use covariance::Covariance;
pub use decompose::{scale_coordinate, window_value, CovarianceDecomposition, ScalePiece};
pub use sample::FieldSampler;
pub use wick::{expect_poly, progressive_check, FieldPolynomial, PolynomialObservable};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("mass squared {0} must be positive; the zero mode makes the operator singular")]
    SingularCovariance(f64),
    #[error("scale base must be at least 2, got {0}")]
    BadScaleBase(usize),
    #[error("need at least one scale")]
    NoScales,
    #[error("materializing {pieces} kernels over {sites} sites exceeds the supported budget")]
    DecompositionTooLarge { pieces: usize, sites: usize },
    #[error("scale piece {scale} has spectral floor {min:.3e}; pieces must be positive semidefinite")]
    PsdViolation { scale: usize, min: f64 },
    #[error("decomposition pieces sum off by {0:.3e}, beyond the reconstruction tolerance")]
    ReconstructionFailure(f64),
    #[error("scale index {j} outside 1..={max}")]
    BadScaleIndex { j: usize, max: usize },
    #[error("negative spectral multiplier {value:.3e} at mode {index}")]
    NegativeMultiplier { index: usize, value: f64 },
    #[error("monomial degree {degree} exceeds the pairing cap {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("observable references site {site} outside the {sites}-site torus")]
    UnknownSite { site: usize, sites: usize },
    #[error(transparent)]
    Lattice(#[from] lattice_core::LatticeError),
}

pub type Result<T> = std::result::Result<T, FieldError>;
