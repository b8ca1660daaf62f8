//! Discrete two-parameter renormalization flow for the effective coupling
//! and mass shift of a long-range quartic perturbation.
//!
//! One step advances the pair (s, mu) from scale j to j + 1:
//!
//!   s_{j+1}  = L^eps s_j (1 - beta_j s_j)
//!   mu_{j+1} = L^alpha (1 - c beta_j s_j) mu_j,   c = (n + 2)/(n + 8),
//!
//! with the coefficient beta_j sourced either as a constant (its limiting
//! value a) or from a per-scale table. The s recursion never reads mu, so
//! the system is triangular: the coupling flows autonomously toward the
//! attracting root s* = (1 - L^-eps)/a while mu rides multipliers that
//! depend on the s trajectory alone. Once L^(alpha j) m^2 reaches 1 the
//! mass term dominates and fluctuations on later scales are irrelevant;
//! past that scale the coefficient is frozen to zero and both variables
//! just rescale geometrically.
//!
//! On top of the stepper sit the derived quantities: the fixed points and
//! their linearized multipliers, the critical initial mass shift located by
//! bisection, the susceptibility exponent read off from how the top-scale
//! mass sensitivity scales with m^2, and a phase portrait classifying grid
//! starts by where they escape.

mod critical;
mod flow;
mod gamma;
mod portrait;

pub use critical::{find_fixed_points, shoot_critical_mu0, CriticalShot, FixedPoints};
pub use flow::{
    mass_scale, run_flow, step_flow, BetaSource, FlowParams, FlowState, FlowTrajectory,
    Termination, OVERFLOW_GUARD,
};
pub use gamma::{extract_gamma, geometric_mass_grid, GammaConfig, GammaEstimate, GammaPoint};
pub use portrait::{phase_portrait, PortraitClass, PortraitPoint};

#[derive(Debug, thiserror::Error)]
pub enum FlowError {
    #[error("mass parameter {0} must be positive and finite")]
    BadMass(f64),
    #[error("scale base {0} must be at least 2")]
    BadBase(usize),
    #[error("epsilon {0} must be nonnegative and finite")]
    BadEpsilon(f64),
    #[error("alpha {0} must be positive and finite")]
    BadAlpha(f64),
    #[error("component count {0} must be nonnegative and finite")]
    BadComponents(f64),
    #[error("limiting coefficient {0} admits no attracting fixed point")]
    NoStableFixedPoint(f64),
    #[error("could not bracket the critical mass shift within [{lo}, {hi}]")]
    BracketingFailure { lo: f64, hi: f64 },
    #[error("need at least {need} mass grid points, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("mass grid spans a factor of {0:.3}, need at least 100")]
    NarrowGrid(f64),
    #[error("mass scale {mass_scale} for m2 = {m2} exceeds the {n_scales} flow scales")]
    MassScaleBeyondTop {
        m2: f64,
        mass_scale: usize,
        n_scales: usize,
    },
    #[error("top-scale sensitivity {0} is not positive, cannot take its log")]
    NonPositiveSensitivity(f64),
    #[error("start s0 = {s0} lies outside [0, {max}]")]
    BadStart { s0: f64, max: f64 },
}

pub type Result<T> = std::result::Result<T, FlowError>;
