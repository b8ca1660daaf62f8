//! Independence across distance and factorization over connected
//! components.
//!
//! When the covariance vanishes beyond half the next-scale block side,
//! observables on polymers separated by at least a block side involve
//! uncorrelated, hence independent, Gaussians: product expectations split.
//! Reblocking then preserves factorization over connected components, and
//! this module measures both facts exactly on a caller-supplied instance.

use crate::functional::{BlockFactorized, PolymerFunctional};
use crate::reblock::reblock;
use crate::Result;
use gaussian_field::FieldPolynomial;
use lattice_core::{connected_components, Polymer, TorusLattice};

#[derive(Clone, Debug)]
pub struct FactorizationReport {
    /// Largest coefficient gap between K on a multi-component polymer and
    /// the product over its components, at the input scale.
    pub input_residual: f64,
    /// Largest |E[FG] - E[F] E[G]| over site observables in disconnected
    /// next-scale block pairs.
    pub disconnected_residual: f64,
    /// Largest coefficient gap between the reblocked functional on a
    /// multi-component polymer and the product over its components.
    pub component_residual: f64,
    /// Multi-component next-scale polymers compared.
    pub polymers_checked: usize,
}

fn components_as_masks(
    torus: &TorusLattice,
    scale: usize,
    blocks: usize,
    mask: u32,
) -> Result<Vec<u32>> {
    let ids = (0..blocks).filter(|b| mask >> b & 1 == 1);
    let comps = connected_components(torus, &Polymer::new(scale, ids))?;
    Ok(comps
        .iter()
        .map(|c| c.blocks.iter().map(|&b| 1u32 << b).sum())
        .collect())
}

fn factorization_residual(
    torus: &TorusLattice,
    f: &PolymerFunctional,
    checked: &mut usize,
) -> Result<f64> {
    let mut worst = 0.0f64;
    for mask in 0..1u32 << f.blocks() {
        let comps = components_as_masks(torus, f.scale(), f.blocks(), mask)?;
        if comps.len() < 2 {
            continue;
        }
        let mut product = FieldPolynomial::constant(1.0);
        for &c in &comps {
            product = product.mul(f.value(c));
        }
        worst = worst.max(f.value(mask).max_coeff_delta(&product));
        *checked += 1;
    }
    Ok(worst)
}

/// Probe observable on one site; its product expectations detect any
/// nonzero covariance between two sites through both moments.
fn site_probe(site: usize) -> FieldPolynomial {
    FieldPolynomial::monomial(1.0, &[site]).add(&FieldPolynomial::monomial(1.0, &[site, site]))
}

/// Checks the product rule on disconnected next-scale block pairs and that
/// reblocking `k` with the given inputs keeps factorization over connected
/// components. The covariance must vanish beyond half the next-scale block
/// side for either property to hold.
pub fn check_component_factorization(
    torus: &TorusLattice,
    i: &BlockFactorized,
    i_plus: &BlockFactorized,
    k: &PolymerFunctional,
    cov: &dyn Fn(usize, usize) -> f64,
) -> Result<FactorizationReport> {
    let mut ignored = 0;
    let input_residual = factorization_residual(torus, k, &mut ignored)?;

    let next = k.scale() + 1;
    let side = torus.block_side(next);
    let mut disconnected_residual = 0.0f64;
    for b1 in 0..torus.block_count(next) {
        for b2 in b1 + 1..torus.block_count(next) {
            if torus.block_distance(next, b1, b2) < side {
                continue;
            }
            for &x in &torus.block_sites(next, b1) {
                for &y in &torus.block_sites(next, b2) {
                    let f = site_probe(x);
                    let g = site_probe(y);
                    let joint = f.mul(&g).expect_all(cov)?;
                    let split = f.expect_all(cov)? * g.expect_all(cov)?;
                    disconnected_residual = disconnected_residual.max((joint - split).abs());
                }
            }
        }
    }

    let tilde = reblock(torus, i, i_plus, k, cov)?;
    let mut polymers_checked = 0;
    let component_residual = factorization_residual(torus, &tilde, &mut polymers_checked)?;

    Ok(FactorizationReport {
        input_residual,
        disconnected_residual,
        component_residual,
        polymers_checked,
    })
}
