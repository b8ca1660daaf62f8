//! Dense polymer-to-polynomial tables and the circle product.

use crate::{PolymerError, Result, MAX_BLOCK_BITS};
use gaussian_field::FieldPolynomial;
use lattice_core::TorusLattice;
use std::collections::BTreeSet;

pub(crate) fn checked_blocks(torus: &TorusLattice, scale: usize) -> Result<usize> {
    if scale > torus.scales() {
        return Err(PolymerError::Lattice(lattice_core::LatticeError::BadScale {
            scale,
            max: torus.scales(),
        }));
    }
    let blocks = torus.block_count(scale);
    if blocks > MAX_BLOCK_BITS {
        return Err(PolymerError::TooManyBlocks {
            blocks,
            cap: MAX_BLOCK_BITS,
        });
    }
    Ok(blocks)
}

/// Functional on the polymers of one scale, tabulated on every block mask.
#[derive(Clone, Debug, PartialEq)]
pub struct PolymerFunctional {
    pub(crate) scale: usize,
    pub(crate) blocks: usize,
    pub(crate) values: Vec<FieldPolynomial>,
}

impl PolymerFunctional {
    pub fn from_fn(
        torus: &TorusLattice,
        scale: usize,
        mut f: impl FnMut(u32) -> FieldPolynomial,
    ) -> Result<Self> {
        let blocks = checked_blocks(torus, scale)?;
        let values = (0..1u32 << blocks).map(|m| f(m)).collect();
        Ok(Self {
            scale,
            blocks,
            values,
        })
    }

    /// Circle-product unit: 1 on the empty polymer, 0 elsewhere.
    pub fn unit(torus: &TorusLattice, scale: usize) -> Result<Self> {
        Self::from_fn(torus, scale, |mask| {
            if mask == 0 {
                FieldPolynomial::constant(1.0)
            } else {
                FieldPolynomial::zero()
            }
        })
    }

    pub fn scale(&self) -> usize {
        self.scale
    }

    pub fn blocks(&self) -> usize {
        self.blocks
    }

    pub fn value(&self, mask: u32) -> &FieldPolynomial {
        assert!((mask as usize) < self.values.len(), "mask out of range");
        &self.values[mask as usize]
    }

    /// (self o other)(X) = sum over submasks Y of self(Y) other(X \ Y).
    pub fn circle(&self, other: &Self) -> Result<Self> {
        if self.scale != other.scale || self.blocks != other.blocks {
            return Err(PolymerError::ScaleMismatch(self.scale, other.scale));
        }
        let mut values = vec![FieldPolynomial::zero(); self.values.len()];
        for x in 0..self.values.len() as u32 {
            let mut acc = FieldPolynomial::zero();
            let mut y = x;
            loop {
                acc = acc.add(&self.values[y as usize].mul(&other.values[(x ^ y) as usize]));
                if y == 0 {
                    break;
                }
                y = (y - 1) & x;
            }
            values[x as usize] = acc;
        }
        Ok(Self {
            scale: self.scale,
            blocks: self.blocks,
            values,
        })
    }

    /// Largest coefficient mismatch across all polymers.
    pub fn max_coeff_delta(&self, other: &Self) -> Result<f64> {
        if self.scale != other.scale || self.blocks != other.blocks {
            return Err(PolymerError::ScaleMismatch(self.scale, other.scale));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.max_coeff_delta(b))
            .fold(0.0, f64::max))
    }

    /// Verifies the support invariant: each value references only sites of
    /// its own polymer.
    pub fn check_support(&self, torus: &TorusLattice) -> Result<()> {
        for (mask, value) in self.values.iter().enumerate() {
            let allowed: BTreeSet<usize> = (0..self.blocks)
                .filter(|b| mask >> b & 1 == 1)
                .flat_map(|b| torus.block_sites(self.scale, b))
                .collect();
            if let Some(&site) = value.support().iter().find(|s| !allowed.contains(s)) {
                return Err(PolymerError::UnsupportedSite {
                    mask: mask as u32,
                    site,
                });
            }
        }
        Ok(())
    }
}

/// Per-block values; the induced functional multiplies them over the
/// blocks of each polymer.
#[derive(Clone, Debug)]
pub struct BlockFactorized {
    pub(crate) scale: usize,
    pub(crate) per_block: Vec<FieldPolynomial>,
}

impl BlockFactorized {
    pub fn new(
        torus: &TorusLattice,
        scale: usize,
        per_block: Vec<FieldPolynomial>,
    ) -> Result<Self> {
        let blocks = checked_blocks(torus, scale)?;
        if per_block.len() != blocks {
            return Err(PolymerError::BlockCount {
                expected: blocks,
                got: per_block.len(),
            });
        }
        Ok(Self { scale, per_block })
    }

    pub fn scale(&self) -> usize {
        self.scale
    }

    pub fn block(&self, id: usize) -> &FieldPolynomial {
        &self.per_block[id]
    }

    /// Product of the per-block values over the blocks in `mask`.
    pub fn product_over(&self, mask: u32) -> FieldPolynomial {
        let mut acc = FieldPolynomial::constant(1.0);
        for (b, value) in self.per_block.iter().enumerate() {
            if mask >> b & 1 == 1 {
                acc = acc.mul(value);
            }
        }
        acc
    }

    pub fn induce(&self, torus: &TorusLattice) -> Result<PolymerFunctional> {
        PolymerFunctional::from_fn(torus, self.scale, |mask| self.product_over(mask))
    }
}
