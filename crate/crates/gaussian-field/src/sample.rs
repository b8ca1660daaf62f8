//! Exact spectral sampling of translation-invariant Gaussian fields.
//!
//! The real eigenbasis of a translation-invariant covariance splits into
//! self-conjugate modes (all wavenumber components 0 or P/2), which carry a
//! single +-1/sqrt(S) vector, and conjugate pairs, which carry a cosine and
//! a sine vector of norm sqrt(2/S). Sampling draws one standard normal per
//! basis vector and scales by the square root of the multiplier, so the
//! field's covariance is exact, not approximate.

use crate::{FieldError, Result};
use lattice_core::{LatticeField, TorusLattice};
use rand::Rng;
use rand_distr::StandardNormal;
use std::f64::consts::TAU;

#[derive(Debug)]
enum Mode {
    /// Wavenumber equal to its own negative: one real vector.
    SelfConjugate { k: Vec<usize>, amp: f64 },
    /// A {k, -k} pair: cosine and sine vectors share the amplitude.
    Pair { k: Vec<usize>, amp: f64 },
}

#[derive(Debug)]
pub struct FieldSampler {
    torus: TorusLattice,
    modes: Vec<Mode>,
    coords: Vec<usize>,
}

impl FieldSampler {
    pub fn new(torus: TorusLattice, multipliers: &[f64]) -> Result<Self> {
        if multipliers.len() != torus.site_count() {
            return Err(FieldError::Lattice(
                lattice_core::LatticeError::BadFieldLength {
                    expected: torus.site_count(),
                    actual: multipliers.len(),
                },
            ));
        }
        let p = torus.period();
        let mut modes = Vec::new();
        for site in 0..torus.site_count() {
            let value = multipliers[site];
            if value < -1e-10 {
                return Err(FieldError::NegativeMultiplier { index: site, value });
            }
            let k = torus.site_coords(site);
            let neg: Vec<usize> = k.iter().map(|&c| (p - c) % p).collect();
            let neg_site = torus.site_index(&neg);
            if neg_site < site {
                continue;
            }
            debug_assert!(
                (multipliers[neg_site] - value).abs() <= 1e-9 * (value.abs() + 1.0),
                "multipliers must be symmetric under k -> -k"
            );
            let amp = value.max(0.0).sqrt();
            if amp == 0.0 {
                continue;
            }
            if neg_site == site {
                modes.push(Mode::SelfConjugate { k, amp });
            } else {
                modes.push(Mode::Pair { k, amp });
            }
        }
        let mut coords = vec![0usize; torus.site_count() * torus.dim()];
        for site in 0..torus.site_count() {
            torus.site_coords_into(site, &mut coords[site * torus.dim()..(site + 1) * torus.dim()]);
        }
        Ok(Self {
            torus,
            modes,
            coords,
        })
    }

    pub fn torus(&self) -> &TorusLattice {
        &self.torus
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> LatticeField {
        let sites = self.torus.site_count();
        let dim = self.torus.dim();
        let p = self.torus.period() as f64;
        let mut values = vec![0.0f64; sites];
        let root_s = (sites as f64).sqrt();
        for mode in &self.modes {
            match mode {
                Mode::SelfConjugate { k, amp } => {
                    let g: f64 = rng.sample(StandardNormal);
                    let scale = amp * g / root_s;
                    for (x, v) in values.iter_mut().enumerate() {
                        let dot: usize = (0..dim)
                            .map(|a| k[a] * self.coords[x * dim + a])
                            .sum();
                        // k components are 0 or P/2, so the phase is 0 or pi.
                        let sign = if (2 * dot / self.torus.period()) % 2 == 0 {
                            1.0
                        } else {
                            -1.0
                        };
                        *v += scale * sign;
                    }
                }
                Mode::Pair { k, amp } => {
                    let gc: f64 = rng.sample(StandardNormal);
                    let gs: f64 = rng.sample(StandardNormal);
                    let scale = amp * (2.0 / sites as f64).sqrt();
                    for (x, v) in values.iter_mut().enumerate() {
                        let dot: usize = (0..dim)
                            .map(|a| k[a] * self.coords[x * dim + a])
                            .sum();
                        let theta = TAU * (dot % self.torus.period()) as f64 / p;
                        *v += scale * (gc * theta.cos() + gs * theta.sin());
                    }
                }
            }
        }
        LatticeField::from_values(self.torus, 1, values).expect("sampler length matches torus")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covariance::Covariance;
    use crate::decompose::CovarianceDecomposition;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_multipliers_give_the_zero_field() {
        let torus = TorusLattice::new(1, 8, 1).unwrap();
        let sampler = FieldSampler::new(torus, &vec![0.0; 8]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = sampler.sample(&mut rng);
        assert!(f.as_slice().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn site_variance_matches_the_kernel_diagonal() {
        let torus = TorusLattice::new(1, 16, 1).unwrap();
        let cov = Covariance::build(torus, 1.5, 0.7).unwrap();
        let sampler = FieldSampler::new(torus, cov.multipliers()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let n = 10_000;
        let mut sq = 0.0;
        for _ in 0..n {
            let f = sampler.sample(&mut rng);
            sq += f.get(0, 0) * f.get(0, 0);
        }
        let var = sq / n as f64;
        let want = cov.row()[0];
        let sigma = want * (2.0 / n as f64).sqrt();
        assert!(
            (var - want).abs() < 5.0 * sigma,
            "variance {var} vs kernel diagonal {want} (sigma {sigma})"
        );
    }

    #[test]
    fn banded_kernel_decorrelates_antipodal_sites() {
        // Multipliers 2 + 2 cos(2 pi k / P) give the exact range-1 row
        // (2, 1, 0, ..., 0, 1): antipodal sites are exactly independent.
        let torus = TorusLattice::new(1, 16, 1).unwrap();
        let mult: Vec<f64> = (0..16)
            .map(|k| 2.0 + 2.0 * (TAU * k as f64 / 16.0).cos())
            .collect();
        let sampler = FieldSampler::new(torus, &mult).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 20_000;
        let (mut far, mut near, mut sq) = (0.0, 0.0, 0.0);
        for _ in 0..n {
            let f = sampler.sample(&mut rng);
            far += f.get(0, 0) * f.get(8, 0);
            near += f.get(0, 0) * f.get(1, 0);
            sq += f.get(0, 0) * f.get(0, 0);
        }
        let sigma = 2.0 / (n as f64).sqrt();
        assert!((far / n as f64).abs() < 5.0 * sigma, "far corr {}", far / n as f64);
        assert!(
            (near / n as f64 - 1.0).abs() < 5.0 * sigma,
            "near corr {}",
            near / n as f64
        );
        assert!((sq / n as f64 - 2.0).abs() < 5.0 * sigma);
    }

    #[test]
    fn empirical_covariance_matches_a_decomposition_piece() {
        let torus = TorusLattice::new(1, 8, 1).unwrap();
        let cov = Covariance::build(torus, 0.9, 0.2).unwrap();
        let dec = CovarianceDecomposition::build(&cov, 2, 3).unwrap();
        let piece = dec.piece(2).unwrap();
        let sampler = FieldSampler::new(torus, &piece.multipliers).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let n = 10_000;
        let mut prods = vec![vec![0.0f64; 0]; 8];
        for row in prods.iter_mut() {
            row.reserve(n);
        }
        for _ in 0..n {
            let f = sampler.sample(&mut rng);
            for x in 0..8 {
                prods[x].push(f.get(0, 0) * f.get(x, 0));
            }
        }
        for x in 0..8 {
            let mean = prods[x].iter().sum::<f64>() / n as f64;
            let var = prods[x]
                .iter()
                .map(|v| (v - mean) * (v - mean))
                .sum::<f64>()
                / (n as f64 - 1.0);
            let stderr = (var / n as f64).sqrt();
            assert!(
                (mean - piece.row[x]).abs() < 5.0 * stderr.max(1e-6),
                "site {x}: {mean} vs {} (stderr {stderr})",
                piece.row[x]
            );
        }
    }

    #[test]
    fn two_dimensional_sampling_is_deterministic_per_seed() {
        let torus = TorusLattice::new(2, 4, 1).unwrap();
        let cov = Covariance::build(torus, 1.0, 0.5).unwrap();
        let sampler = FieldSampler::new(torus, cov.multipliers()).unwrap();
        let a = sampler.sample(&mut ChaCha8Rng::seed_from_u64(9));
        let b = sampler.sample(&mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a.as_slice(), b.as_slice());
        assert!(a.as_slice().iter().any(|&v| v != 0.0));
    }

    #[test]
    fn negative_multipliers_are_rejected() {
        let torus = TorusLattice::new(1, 4, 1).unwrap();
        let err = FieldSampler::new(torus, &[1.0, -0.5, 0.2, -0.5]).unwrap_err();
        assert!(matches!(err, FieldError::NegativeMultiplier { index: 1, .. }));
    }
}
