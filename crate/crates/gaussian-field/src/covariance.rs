//! The base covariance: spectral inversion of (-lap)^(alpha/2) + m^2.

use crate::{FieldError, Result};
use lattice_core::{kernel_from_multipliers, laplacian_spectrum, LatticeError, TorusLattice};

#[derive(Clone, Debug)]
pub struct Covariance {
    torus: TorusLattice,
    alpha: f64,
    m2: f64,
    multipliers: Vec<f64>,
    row: Vec<f64>,
}

impl Covariance {
    pub fn build(torus: TorusLattice, alpha: f64, m2: f64) -> Result<Self> {
        if !(m2 > 0.0) || !m2.is_finite() {
            return Err(FieldError::SingularCovariance(m2));
        }
        if !(alpha > 0.0 && alpha <= 2.0) || !alpha.is_finite() {
            return Err(FieldError::Lattice(LatticeError::BadAlpha(alpha)));
        }
        let multipliers: Vec<f64> = laplacian_spectrum(&torus)
            .into_iter()
            .map(|l| 1.0 / (l.max(0.0).powf(alpha / 2.0) + m2))
            .collect();
        let row = kernel_from_multipliers(&torus, &multipliers)?;
        Ok(Self {
            torus,
            alpha,
            m2,
            multipliers,
            row,
        })
    }

    pub fn torus(&self) -> &TorusLattice {
        &self.torus
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn m2(&self) -> f64 {
        self.m2
    }

    /// Spectral multipliers (lambda_k^(alpha/2) + m^2)^(-1), site-indexed.
    pub fn multipliers(&self) -> &[f64] {
        &self.multipliers
    }

    /// Translation-invariant kernel row C_{0,x}.
    pub fn row(&self) -> &[f64] {
        &self.row
    }

    pub fn entry(&self, x: usize, y: usize) -> f64 {
        self.row[self.torus.relative_site(x, y)]
    }
}
