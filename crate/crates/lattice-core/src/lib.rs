//! Discrete torus geometry shared by the walk, field, and renormalization
//! crates: site indexing on `Z_P^d`, block hierarchies with polymer
//! (block-set) operations, scalar/vector lattice fields, and spectral
//! machinery for the Laplacian and its fractional powers.

mod blocks;
mod field;
mod spectral;
mod torus;

pub use blocks::{closure, connected_components, Polymer};
pub use field::LatticeField;
pub use spectral::{
    apply_translation_kernel, fractional_laplacian_row, kernel_from_multipliers,
    laplacian_eigenvalue, laplacian_spectrum,
};
pub use torus::{laplacian_apply, TorusLattice};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum LatticeError {
    #[error("dimension {0} out of supported range 1..=5")]
    BadDimension(usize),
    #[error("torus period {period} below minimum 3 (base {base}, scales {scales})")]
    PeriodTooSmall {
        base: usize,
        scales: usize,
        period: usize,
    },
    #[error("torus parameters overflow addressable site count")]
    SizeOverflow,
    #[error("scale {scale} out of range 0..={max}")]
    BadScale { scale: usize, max: usize },
    #[error("field defined on a different torus")]
    TorusMismatch,
    #[error("field has {actual} values, expected {expected}")]
    BadFieldLength { expected: usize, actual: usize },
    #[error("fractional exponent alpha={0} outside (0, 2]")]
    BadAlpha(f64),
    #[error("polymer holds block id {id} outside scale-{scale} grid of {count} blocks")]
    BadBlockId {
        scale: usize,
        id: usize,
        count: usize,
    },
    #[error("closure undefined above the top scale {0}")]
    AboveTopScale(usize),
}

pub type Result<T> = std::result::Result<T, LatticeError>;
