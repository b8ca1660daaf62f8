//! Brute-force quartic-field oracle on tiny tori.
//!
//! Everything here is direct numerical integration: the Boltzmann average
//! of a quartic model on at most four sites is a tensor-product quadrature
//! in at most eight field coordinates, so no sampling, no expansions, and
//! no scale decompositions are involved. That makes this crate a slow but
//! trustworthy reference point for the layered machinery elsewhere: the
//! susceptibility comes once from the plain Boltzmann weight and once from
//! the Gaussian-convolution route through the partition function, and the
//! two must agree to quadrature accuracy.
//!
//! Tori this small fall below the period-3 floor of the shared lattice
//! type, whose neighbor bookkeeping needs the two neighbors along an axis
//! to differ, so the crate carries its own miniature torus with a dense
//! Laplacian; on periods where both exist they agree spectrally.

mod direct;
mod quadrature;
mod tiny;
mod zn;

pub use direct::{chi_direct, correlation_matrix};
pub use quadrature::QuadratureSpec;
pub use tiny::TinyTorus;
pub use zn::{chi_via_zn, second_derivative_along_ones};

/// Tensor quadrature beyond this many point evaluations is refused.
pub const WORK_CAP: f64 = 2e8;

#[derive(Debug, thiserror::Error)]
pub enum Phi4Error {
    #[error("axis period {0} must be at least 1")]
    BadPeriod(usize),
    #[error("{0} sites exceed the brute-force cap of 4")]
    TooManySites(usize),
    #[error("component count {0} is outside {{1, 2}}")]
    BadComponents(usize),
    #[error("need g > 0, or g = 0 with nu > 0; got g = {g}, nu = {nu}")]
    BadPotential { g: f64, nu: f64 },
    #[error("mass parameter {0} must be positive and finite")]
    BadMass(f64),
    #[error("alpha {0} must lie in (0, 2]")]
    BadAlpha(f64),
    #[error("node count {0} must be even and at least 4")]
    BadNodes(usize),
    #[error("cutoff radius {0} must be positive and finite")]
    BadCutoff(f64),
    #[error("grid too coarse: refining moves the reference integral by {drift:.3e}")]
    GridTooCoarse { drift: f64 },
    #[error("{nodes} nodes in dimension {dim} exceed the work cap")]
    TooMuchWork { nodes: usize, dim: usize },
    #[error("derivative step sensitivity {sensitivity:.3e} exceeds 1e-5")]
    DifferentiationUnstable { sensitivity: f64 },
}

pub type Result<T> = std::result::Result<T, Phi4Error>;
