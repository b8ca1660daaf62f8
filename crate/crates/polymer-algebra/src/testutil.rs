//! Shared generators for the exact-identity tests. Integer coefficients
//! keep all f64 arithmetic exact well past the magnitudes reached here.

use crate::functional::PolymerFunctional;
use gaussian_field::FieldPolynomial;
use lattice_core::TorusLattice;
use rand::Rng;

/// Random polynomial over the given sites: up to `max_terms` monomials of
/// degree at most `max_deg`, coefficients in {-2, ..., 2}. With no sites
/// only the constant term survives.
pub(crate) fn rand_poly(
    rng: &mut impl Rng,
    sites: &[usize],
    max_terms: usize,
    max_deg: usize,
) -> FieldPolynomial {
    let mut p = FieldPolynomial::constant(rng.random_range(-2i64..=2) as f64);
    if sites.is_empty() {
        return p;
    }
    for _ in 0..rng.random_range(1..=max_terms) {
        let deg = rng.random_range(1..=max_deg);
        let mono: Vec<usize> = (0..deg)
            .map(|_| sites[rng.random_range(0..sites.len())])
            .collect();
        let coeff = rng.random_range(-2i64..=2) as f64;
        p = p.add(&FieldPolynomial::monomial(coeff, &mono));
    }
    p
}

/// Random functional honouring the support invariant: the value on each
/// polymer only references sites of its own blocks.
pub(crate) fn rand_functional(
    torus: &TorusLattice,
    scale: usize,
    rng: &mut impl Rng,
) -> PolymerFunctional {
    let blocks = torus.block_count(scale);
    PolymerFunctional::from_fn(torus, scale, |mask| {
        let sites: Vec<usize> = (0..blocks)
            .filter(|b| mask >> b & 1 == 1)
            .flat_map(|b| torus.block_sites(scale, b))
            .collect();
        rand_poly(rng, &sites, 2, 2)
    })
    .unwrap()
}
