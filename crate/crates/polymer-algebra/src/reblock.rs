//! The one-scale reblocking map.
//!
//! Scale-j polymers are regrouped by their closure, the smallest polymer of
//! scale-(j+1) blocks containing them. For block-factorized I, I_plus and a
//! remainder functional K, the next-scale remainder is
//!
//!   K~(U) = sum over X with closure(X) = U of
//!           I_plus(U \ X) E[(deltaI o thetaK)(X)],
//!
//! and it satisfies E[theta (I o K)(Lambda)] = (I_plus o K~)(Lambda) with
//! the next-scale circle product. Both sides are polynomials, so the
//! identity is checked coefficient by coefficient in the tests.

use crate::functional::{checked_blocks, BlockFactorized, PolymerFunctional};
use crate::{PolymerError, Result};
use gaussian_field::FieldPolynomial;
use lattice_core::TorusLattice;

/// Views per-scale-j-block values as a functional on scale-(j+1) polymers:
/// the value on U is the product over the scale-j blocks U contains.
pub fn lift_block_functional(
    torus: &TorusLattice,
    f: &BlockFactorized,
) -> Result<PolymerFunctional> {
    let scale = f.scale();
    let children = children_by_parent(torus, scale)?;
    PolymerFunctional::from_fn(torus, scale + 1, |mask| {
        let mut sub = 0u32;
        for (pid, &m) in children.iter().enumerate() {
            if mask >> pid & 1 == 1 {
                sub |= m;
            }
        }
        f.product_over(sub)
    })
}

/// Scale-j block mask of each scale-(j+1) block's children.
fn children_by_parent(torus: &TorusLattice, scale: usize) -> Result<Vec<u32>> {
    if scale + 1 > torus.scales() {
        return Err(PolymerError::Lattice(
            lattice_core::LatticeError::AboveTopScale(torus.scales()),
        ));
    }
    let blocks = checked_blocks(torus, scale)?;
    let parents = checked_blocks(torus, scale + 1)?;
    let mut children = vec![0u32; parents];
    for id in 0..blocks {
        children[torus.parent_block(scale, id)] |= 1 << id;
    }
    Ok(children)
}

/// Builds K~ at scale j+1 from scale-j data; `cov` is the covariance of the
/// fluctuation integrated out at this step.
pub fn reblock(
    torus: &TorusLattice,
    i: &BlockFactorized,
    i_plus: &BlockFactorized,
    k: &PolymerFunctional,
    cov: &dyn Fn(usize, usize) -> f64,
) -> Result<PolymerFunctional> {
    let scale = k.scale();
    if i.scale() != scale || i_plus.scale() != scale {
        return Err(PolymerError::ScaleMismatch(i.scale(), scale));
    }
    let blocks = k.blocks();
    let children = children_by_parent(torus, scale)?;
    let parents = children.len();
    let mut parent_bit = vec![0u32; blocks];
    for (pid, &m) in children.iter().enumerate() {
        for b in 0..blocks {
            if m >> b & 1 == 1 {
                parent_bit[b] = 1 << pid;
            }
        }
    }

    // deltaI over single blocks, then over all masks by peeling the lowest
    // set bit.
    let delta_block: Vec<FieldPolynomial> = (0..blocks)
        .map(|b| i.block(b).theta_shift().sub(i_plus.block(b)))
        .collect();
    let mut delta = Vec::with_capacity(1 << blocks);
    delta.push(FieldPolynomial::constant(1.0));
    for mask in 1u32..1 << blocks {
        let low = mask.trailing_zeros() as usize;
        let rest = delta[(mask & (mask - 1)) as usize].clone();
        delta.push(rest.mul(&delta_block[low]));
    }

    let theta_k: Vec<FieldPolynomial> =
        (0..1u32 << blocks).map(|m| k.value(m).theta_shift()).collect();

    let mut values = vec![FieldPolynomial::zero(); 1 << parents];
    for x in 0..1u32 << blocks {
        let mut j_poly = FieldPolynomial::zero();
        let mut y = x;
        loop {
            j_poly = j_poly.add(&delta[y as usize].mul(&theta_k[(x ^ y) as usize]));
            if y == 0 {
                break;
            }
            y = (y - 1) & x;
        }
        let integrated = j_poly.integrate_fluctuation(cov)?;

        let mut closure = 0u32;
        for b in 0..blocks {
            if x >> b & 1 == 1 {
                closure |= parent_bit[b];
            }
        }
        let mut remainder = 0u32;
        for (pid, &m) in children.iter().enumerate() {
            if closure >> pid & 1 == 1 {
                remainder |= m;
            }
        }
        remainder &= !x;
        let term = i_plus.product_over(remainder).mul(&integrated);
        values[closure as usize] = values[closure as usize].add(&term);
    }

    PolymerFunctional::from_fn(torus, scale + 1, |mask| values[mask as usize].clone())
}
