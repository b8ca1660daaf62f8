//! Boson-fermion integral representation of the weakly self-avoiding walk
//! on a graph with at most three sites.
//!
//! Each site carries a complex boson pair (u_x, v_x) and a fermion pair
//! (psi_x, psibar_x). Fermions are wedge monomials in the 2M anticommuting
//! generators; their coefficients are scalar functions sampled on a tensor
//! quadrature grid over R^{2M}. The susceptibility is a single integral of
//! exp(-sum_z (g tau_z^2 + nu tau_z + tau_{Delta,z})) against phibar_0 phi_x
//! summed over endpoints x, and the whole pipeline is cross-checked against
//! walk Monte Carlo, Gaussian resolvents, and a one-site radial reduction.
//!
//! Monomial bookkeeping is single-threaded. Coefficient arithmetic runs
//! grid-parallel once vectors are long enough, and the six-dimensional
//! integrals stream the grid in two-dimensional slabs folded in a fixed
//! order, so results are bit-stable for a fixed grid.

mod algebra;
mod berezin;
mod grid;
mod intrep;
mod tau;
mod taylor;

pub use algebra::{GrassmannAlgebraElement, Parity, MAX_SITES};
pub use berezin::{berezin_integrate, pair_measure_factor, TAIL_LIMIT};
pub use grid::{CoordinateBlock, QuadratureGrid, POINT_BUDGET};
pub use intrep::{evaluate_intrep, one_site_chi, IntrepEvaluation};
pub use tau::{SiteGraph, TauForm};
pub use taylor::{exp_neg_derivative, smooth_function_of_form};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SusyError {
    #[error("site count {0} outside 1..=3")]
    BadSiteCount(usize),
    #[error("site counts differ: {left} vs {right}")]
    SiteMismatch { left: usize, right: usize },
    #[error("coefficient grids differ in length: {left} vs {right}")]
    PointMismatch { left: usize, right: usize },
    #[error("generator index {index} outside 0..{limit}")]
    BadGenerator { index: usize, limit: usize },
    #[error("smooth functions of forms need an even argument")]
    OddForm,
    #[error("element carries {points} points but the grid has {grid}")]
    GridMismatch { points: usize, grid: usize },
    #[error("need an even node count of at least 4 per axis, got {0}")]
    BadNodes(usize),
    #[error("cutoff must be positive and finite, got {0}")]
    BadCutoff(f64),
    #[error("grid would hold {points:.3e} points, budget is {budget:.3e}")]
    TooManyPoints { points: f64, budget: f64 },
    #[error("boundary shell holds integrand mass fraction {tail:.3e}; enlarge the cutoff")]
    RefineCutoff { tail: f64 },
    #[error("potential g = {g}, nu = {nu} does not confine the integral")]
    BadPotential { g: f64, nu: f64 },
    #[error("edge ({0}, {1}) is invalid for this graph")]
    BadEdge(usize, usize),
}

pub type Result<T> = std::result::Result<T, SusyError>;
