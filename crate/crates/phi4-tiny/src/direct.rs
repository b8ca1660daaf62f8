//! Susceptibility straight from the Boltzmann weight.
//!
//! The average of phi_x . phi_y is taken against
//! e^(-sum_x V(phi_x) - 1/2 sum_c phi_c . (-D phi_c)) with the
//! nearest-neighbor Laplacian and V(phi) = (g/4)|phi|^4 + (nu/2)|phi|^2,
//! by full tensor quadrature over all n |Lambda| field coordinates. The
//! susceptibility is the correlation of the origin with everything,
//! divided by the number of components.

use crate::quadrature::{check_potential, tensor_accumulate, QuadratureSpec};
use crate::tiny::TinyTorus;
use crate::{Phi4Error, Result};

fn check_components(n: usize) -> Result<()> {
    if n == 1 || n == 2 {
        Ok(())
    } else {
        Err(Phi4Error::BadComponents(n))
    }
}

/// Lowest possible total energy; the kinetic form is positive
/// semidefinite, so the per-site potential minimum is a global floor.
fn energy_floor(sites: usize, g: f64, nu: f64) -> f64 {
    if g > 0.0 && nu < 0.0 {
        -(sites as f64) * nu * nu / (4.0 * g)
    } else {
        0.0
    }
}

/// Flattened matrix of <phi_x . phi_y> under the quartic Boltzmann
/// weight, summed over components without dividing by n.
pub fn correlation_matrix(
    torus: &TinyTorus,
    g: f64,
    nu: f64,
    n: usize,
    spec: &QuadratureSpec,
) -> Result<Vec<f64>> {
    check_potential(g, nu)?;
    check_components(n)?;
    spec.verify_for(g, nu)?;
    let sites = torus.site_count();
    let lap = torus.laplacian();
    let dim = sites * n;
    let energy = |coords: &[f64]| {
        let mut e = 0.0;
        for x in 0..sites {
            let r2: f64 = (0..n).map(|c| coords[x * n + c] * coords[x * n + c]).sum();
            e += g / 4.0 * r2 * r2 + nu / 2.0 * r2;
        }
        for c in 0..n {
            for x in 0..sites {
                for y in 0..sites {
                    e += 0.5 * lap[x * sites + y] * coords[x * n + c] * coords[y * n + c];
                }
            }
        }
        e
    };
    let observe = |coords: &[f64], out: &mut [f64]| {
        for x in 0..sites {
            for y in 0..sites {
                out[x * sites + y] =
                    (0..n).map(|c| coords[x * n + c] * coords[y * n + c]).sum();
            }
        }
    };
    let floor = energy_floor(sites, g, nu);
    let (z, sums) = tensor_accumulate(spec, dim, sites * sites, floor, energy, observe)?;
    Ok(sums.into_iter().map(|s| s / z).collect())
}

/// chi = (1/n) sum_x <phi_0 . phi_x>.
pub fn chi_direct(
    torus: &TinyTorus,
    g: f64,
    nu: f64,
    n: usize,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let corr = correlation_matrix(torus, g, nu, n, spec)?;
    let sites = torus.site_count();
    Ok(corr[..sites].iter().sum::<f64>() / n as f64)
}
