//! Coefficient-level checks of the reblocking step. The identity under
//! test: integrating the shifted circle product of I and K over the
//! fluctuation equals the circle product of the lifted I_plus with the
//! reblocked remainder, coefficient by coefficient. Random instances use
//! small integer coefficients, so every sum is exact in f64 and the
//! residuals measure algebra, not rounding.
//!
//! The factorization half runs on a fixed 16-site ring at scale one: its
//! coarser scale has four blocks, the smallest count where polymers with
//! two components exist, and the banded covariance has range one so sites
//! in distant blocks decouple exactly.

use crate::manifest::{RunManifest, RunWriter};
use crate::{config_error, module_error, CliError, Result};
use clap::Args;
use gaussian_field::FieldPolynomial;
use lattice_core::{connected_components, Polymer, TorusLattice};
use polymer_algebra::{
    check_component_factorization, lift_block_functional, reblock, BlockFactorized,
    PolymerFunctional, MAX_BLOCK_BITS,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::path::Path;

#[derive(Debug, Args)]
pub struct PolymerArgs {
    /// Torus dimension.
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    /// Block side; the period per axis is base^scales.
    #[arg(long, default_value_t = 2)]
    pub base: usize,
    #[arg(long, default_value_t = 2)]
    pub scales: usize,
    /// Scale the random identity instances live on.
    #[arg(long, default_value_t = 0)]
    pub scale: usize,
    /// Random (I, I_plus, K) triples checked against the identity.
    #[arg(long, default_value_t = 20)]
    pub instances: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

/// Random polynomial over the given sites: up to `max_terms` monomials of
/// degree at most `max_deg`, coefficients in -2..=2.
fn rand_poly(rng: &mut ChaCha8Rng, sites: &[usize], max_terms: usize, max_deg: usize) -> FieldPolynomial {
    let mut poly = FieldPolynomial::constant(rng.random_range(-2i64..=2) as f64);
    if sites.is_empty() {
        return poly;
    }
    for _ in 0..rng.random_range(1..=max_terms) {
        let degree = rng.random_range(1..=max_deg);
        let monomial: Vec<usize> = (0..degree)
            .map(|_| sites[rng.random_range(0..sites.len())])
            .collect();
        poly = poly.add(&FieldPolynomial::monomial(rng.random_range(-2i64..=2) as f64, &monomial));
    }
    poly
}

/// Random functional honouring the support invariant: the value on each
/// polymer only references sites of its own blocks.
fn rand_functional(torus: &TorusLattice, scale: usize, rng: &mut ChaCha8Rng) -> Result<PolymerFunctional> {
    let blocks = torus.block_count(scale);
    PolymerFunctional::from_fn(torus, scale, |mask| {
        let sites: Vec<usize> = (0..blocks)
            .filter(|b| mask >> b & 1 == 1)
            .flat_map(|b| torus.block_sites(scale, b))
            .collect();
        rand_poly(rng, &sites, 2, 2)
    })
    .map_err(|e| module_error("polymer-algebra", e))
}

fn rand_block_factorized(torus: &TorusLattice, scale: usize, rng: &mut ChaCha8Rng) -> Result<BlockFactorized> {
    let values = (0..torus.block_count(scale))
        .map(|b| rand_poly(rng, &torus.block_sites(scale, b), 2, 2))
        .collect();
    BlockFactorized::new(torus, scale, values).map_err(|e| module_error("polymer-algebra", e))
}

/// Integer positive semidefinite covariance A^T A from a random square
/// integer matrix.
fn rand_psd(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<f64>> {
    let a: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..n).map(|_| rng.random_range(-2i64..=2) as f64).collect())
        .collect();
    (0..n)
        .map(|x| (0..n).map(|y| (0..n).map(|r| a[r][x] * a[r][y]).sum()).collect())
        .collect()
}

/// Functional that factorizes over connected components by construction:
/// connected polymers draw independent values, the rest multiply them.
/// Submasks precede supersets in the enumeration, so each component's value
/// exists by the time a product needs it.
fn component_factorized_k(
    torus: &TorusLattice,
    scale: usize,
    rng: &mut ChaCha8Rng,
) -> Result<PolymerFunctional> {
    let blocks = torus.block_count(scale);
    let mut values: HashMap<u32, FieldPolynomial> = HashMap::new();
    PolymerFunctional::from_fn(torus, scale, |mask| {
        if mask == 0 {
            return FieldPolynomial::constant(1.0);
        }
        let polymer = Polymer::new(scale, (0..blocks).filter(|b| mask >> b & 1 == 1));
        let comps = connected_components(torus, &polymer).expect("mask within block range");
        if comps.len() == 1 {
            let sites: Vec<usize> = polymer
                .blocks
                .iter()
                .map(|&b| torus.block_sites(scale, b)[0])
                .collect();
            let value = rand_poly(rng, &sites, 2, 1);
            values.insert(mask, value.clone());
            return value;
        }
        let mut product = FieldPolynomial::constant(1.0);
        for comp in comps {
            let sub: u32 = comp.blocks.iter().map(|&b| 1u32 << b).sum();
            product = product.mul(values.get(&sub).expect("component seen earlier"));
        }
        product
    })
    .map_err(|e| module_error("polymer-algebra", e))
}

/// Factorized block weight with genuine field dependence on the listed
/// blocks only; the rest are positive constants.
fn sparse_factorized(
    torus: &TorusLattice,
    scale: usize,
    field_blocks: &[usize],
    rng: &mut ChaCha8Rng,
) -> Result<BlockFactorized> {
    let values = (0..torus.block_count(scale))
        .map(|b| {
            if field_blocks.contains(&b) {
                rand_poly(rng, &[torus.block_sites(scale, b)[0]], 1, 1)
            } else {
                FieldPolynomial::constant(rng.random_range(1..=2i64) as f64)
            }
        })
        .collect();
    BlockFactorized::new(torus, scale, values).map_err(|e| module_error("polymer-algebra", e))
}

/// Tridiagonal circulant: 1 on the diagonal, 1/4 at distance one. Range
/// one, so it is admissible as a next-scale covariance whenever the
/// next-scale block side is at least two; eigenvalues 1 + cos(2 pi k / P)/2
/// keep it positive definite.
fn banded_cov(torus: &TorusLattice) -> impl Fn(usize, usize) -> f64 + '_ {
    |x, y| match torus.distance_l1(x, y) {
        0 => 1.0,
        1 => 0.25,
        _ => 0.0,
    }
}

pub fn run(out: &Path, args: &PolymerArgs) -> Result<RunManifest> {
    if args.scale + 1 > args.scales {
        return Err(config_error("scale", "reblocking needs one scale of headroom"));
    }
    if args.instances == 0 {
        return Err(config_error("instances", "need at least one instance"));
    }
    if !(args.tol > 0.0) {
        return Err(config_error("tol", "tolerance must be positive"));
    }

    let torus = TorusLattice::new(args.dim, args.base, args.scales)
        .map_err(|e| module_error("lattice-core", e))?;
    if torus.block_count(args.scale) > MAX_BLOCK_BITS {
        return Err(config_error(
            "scale",
            format!("more than {MAX_BLOCK_BITS} blocks at this scale; the dense tables stop being exhaustible"),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let full_here = (1u32 << torus.block_count(args.scale)) - 1;
    let full_next = (1u32 << torus.block_count(args.scale + 1)) - 1;
    let mut identity_residual = 0.0f64;
    for _ in 0..args.instances {
        let cov_matrix = rand_psd(&mut rng, torus.site_count());
        let cov = |x: usize, y: usize| cov_matrix[x][y];
        let i = rand_block_factorized(&torus, args.scale, &mut rng)?;
        let i_plus = rand_block_factorized(&torus, args.scale, &mut rng)?;
        let k = rand_functional(&torus, args.scale, &mut rng)?;

        let tilde = reblock(&torus, &i, &i_plus, &k, &cov)
            .map_err(|e| module_error("polymer-algebra", e))?;
        let lhs = i
            .induce(&torus)
            .and_then(|f| f.circle(&k))
            .map_err(|e| module_error("polymer-algebra", e))?
            .value(full_here)
            .theta_shift()
            .integrate_fluctuation(&cov)
            .map_err(|e| module_error("gaussian-field", e))?;
        let rhs = lift_block_functional(&torus, &i_plus)
            .and_then(|f| f.circle(&tilde))
            .map_err(|e| module_error("polymer-algebra", e))?
            .value(full_next)
            .clone();
        identity_residual = identity_residual.max(lhs.max_coeff_delta(&rhs));
    }

    let ring = TorusLattice::new(1, 2, 4).map_err(|e| module_error("lattice-core", e))?;
    let i = sparse_factorized(&ring, 1, &[0, 3], &mut rng)?;
    let i_plus = sparse_factorized(&ring, 1, &[0, 3], &mut rng)?;
    let k = component_factorized_k(&ring, 1, &mut rng)?;
    let cov = banded_cov(&ring);
    let report = check_component_factorization(&ring, &i, &i_plus, &k, &cov)
        .map_err(|e| module_error("polymer-algebra", e))?;

    let pass = identity_residual <= args.tol
        && report.input_residual <= args.tol
        && report.disconnected_residual <= args.tol
        && report.component_residual <= args.tol
        && report.polymers_checked > 0;

    let mut writer = RunWriter::create(out, "polymer-check", args.seed)?;
    writer.record("dim", args.dim);
    writer.record("base", args.base);
    writer.record("scales", args.scales);
    writer.record("scale", args.scale);
    writer.record("instances", args.instances);
    writer.record("seed", args.seed);
    writer.record("tol", args.tol);

    let summary = serde_json::json!({
        "dim": args.dim,
        "period": torus.period(),
        "scale": args.scale,
        "instances": args.instances,
        "seed": args.seed,
        "identity_residual": identity_residual,
        "factorization_period": ring.period(),
        "factorization_scale": 1,
        "input_residual": report.input_residual,
        "disconnected_residual": report.disconnected_residual,
        "component_residual": report.component_residual,
        "polymers_checked": report.polymers_checked,
        "tol": args.tol,
        "pass": pass,
    });
    writer.artifact("polymer_check.jsonl", format!("{summary}\n").as_bytes())?;
    let manifest = writer.finish()?;
    if pass {
        Ok(manifest)
    } else {
        Err(CliError::Check(format!(
            "identity {identity_residual:.3e}, factorization {:.3e} against tol {:.1e}",
            report.component_residual, args.tol
        )))
    }
}
