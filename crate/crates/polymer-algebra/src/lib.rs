//! Functionals on polymers and the one-scale reblocking map.
//!
//! A polymer at scale j is a set of scale-j blocks, stored here as a bitmask
//! over block ids, and a functional assigns a polynomial in the field
//! variables to every polymer. The three operations are the circle product
//!
//!   (F o G)(X) = sum over Y <= X of F(Y) G(X \ Y),
//!
//! products induced from per-block values, and the reblocking map that
//! rebuilds a remainder coordinate at scale j+1 from block-factorized I,
//! I_plus and a scale-j K:
//!
//!   K~(U) = sum over X with closure(X) = U of
//!           I_plus(U \ X) E[(deltaI o thetaK)(X)],
//!
//! where deltaI(X) multiplies thetaI(B) - I_plus(B) over the blocks of X,
//! theta shifts the field by the integration variable, and E integrates that
//! variable against a next-scale covariance. Everything is exact: values are
//! polynomials, expectations are pair sums, and identities are checked
//! coefficient by coefficient. Tables are dense over the 2^blocks masks, so
//! scales are capped at twelve blocks.

mod factor;
mod functional;
mod reblock;
#[cfg(test)]
pub(crate) mod testutil;

pub use factor::{check_component_factorization, FactorizationReport};
pub use functional::{BlockFactorized, PolymerFunctional};
pub use reblock::{lift_block_functional, reblock};

use thiserror::Error;

/// Dense mask tables double per block; beyond this the exhaustive sums in
/// the circle product and reblocking stop being exhaustible.
pub const MAX_BLOCK_BITS: usize = 12;

#[derive(Debug, Error)]
pub enum PolymerError {
    #[error("functionals live at different scales ({0} vs {1})")]
    ScaleMismatch(usize, usize),
    #[error("scale has {blocks} blocks, dense polymer tables are capped at {cap}")]
    TooManyBlocks { blocks: usize, cap: usize },
    #[error("expected one value per block ({expected}), got {got}")]
    BlockCount { expected: usize, got: usize },
    #[error("value on polymer mask {mask:#b} touches site {site} outside it")]
    UnsupportedSite { mask: u32, site: usize },
    #[error(transparent)]
    Lattice(#[from] lattice_core::LatticeError),
    #[error(transparent)]
    Field(#[from] gaussian_field::FieldError),
}

pub type Result<T> = std::result::Result<T, PolymerError>;
