//! Continuous-time weakly self-avoiding walk.
//!
//! A continuous-time walk holds at each site for an exponential time and
//! jumps according to its generator; the self-intersection local time
//! I(T) = sum_x l_x(T)^2 penalises returns, and the two observables built
//! on it are c(T, g) = E[exp(-g I(T))] and the susceptibility
//! chi(g, nu) = integral of c(T, g) exp(-nu T) over T >= 0.

mod graphs;
mod localtime;
mod observables;
mod walk;

pub use graphs::GraphGenerator;
pub use localtime::{local_times, self_intersection_local_time};
pub use observables::{estimate_c, estimate_chi, ChiEstimate, WsawEstimate};
pub use walk::{simulate_ct_walk, CtGenerator, CtWalkTrajectory, Site, MAX_DIM};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum WsawError {
    #[error("horizon must be positive, got {0}")]
    BadHorizon(f64),
    #[error("coupling must be nonnegative, got {0}")]
    BadCoupling(f64),
    #[error("susceptibility integration needs nu > 0, got {0}; near-critical integration is unsupported")]
    UnsupportedRegime(f64),
    #[error("invalid generator: {0}")]
    BadGenerator(String),
    #[error("grid spacing must be positive and no larger than the horizon")]
    BadGrid,
    #[error("sample count must be positive")]
    NoSamples,
}

pub type Result<T> = std::result::Result<T, WsawError>;
