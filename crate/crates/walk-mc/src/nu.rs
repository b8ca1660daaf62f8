//! Mean squared displacement versus length, and the exponent fit.
//!
//! For each length n a pivot chain is run from a straight rod; after burn-in
//! the squared end-to-end distance is recorded at every proposal (the chain
//! state repeats on rejection, which is what the stationary average wants).
//! The exponent estimate is half the slope of ln E[R^2] against ln n.
//! Uncertainty per length comes from batch means over fixed-size blocks of
//! consecutive proposals, which absorbs the autocorrelation of the chain.

use crate::pivot::PivotWalk;
use crate::{Result, WalkError};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

#[derive(Clone, Copy, Debug)]
pub struct ChainSettings {
    /// Accepted moves discarded before measurement starts.
    pub burn_in_accepted: usize,
    /// Measurement continues until this many moves have been accepted.
    pub min_accepted: usize,
    /// Measurement also continues until this many proposals have been made.
    pub min_proposals: usize,
    pub seed: u64,
}

impl Default for ChainSettings {
    fn default() -> Self {
        Self {
            burn_in_accepted: 10_000,
            min_accepted: 100_000,
            min_proposals: 200_000,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct LengthEstimate {
    pub len: usize,
    pub mean_r2: f64,
    pub stderr_r2: f64,
    pub accepted: usize,
    pub proposals: usize,
}

#[derive(Clone, Debug)]
pub struct NuEstimate {
    pub dim: usize,
    pub nu: f64,
    pub nu_stderr: f64,
    pub slope: f64,
    pub intercept: f64,
    pub per_length: Vec<LengthEstimate>,
}

/// Runs one chain at a single length. Deterministic for fixed settings: the
/// generator stream is derived from the length, so concurrent lengths do not
/// share randomness.
pub fn sample_r2(dim: usize, len: usize, settings: &ChainSettings) -> Result<LengthEstimate> {
    let mut walk = PivotWalk::rod(dim, len)?;
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    rng.set_stream(len as u64);

    let cap = settings
        .min_proposals
        .max(settings.min_accepted)
        .saturating_mul(500);

    let mut accepted = 0usize;
    let mut proposals = 0usize;
    while accepted < settings.burn_in_accepted {
        proposals += 1;
        if walk.pivot_random(&mut rng) {
            accepted += 1;
        }
        if proposals >= cap {
            return Err(WalkError::MixingFailure {
                n: len,
                accepted,
                proposals,
            });
        }
    }

    let batch_len = (settings.min_proposals / 64).max(64);
    let mut batches: Vec<f64> = Vec::new();
    let mut batch_sum = 0.0;
    let mut in_batch = 0usize;
    let mut total = 0.0;
    accepted = 0;
    proposals = 0;
    loop {
        proposals += 1;
        if walk.pivot_random(&mut rng) {
            accepted += 1;
        }
        let r2 = walk.end_to_end_sq() as f64;
        total += r2;
        batch_sum += r2;
        in_batch += 1;
        if in_batch == batch_len {
            batches.push(batch_sum / batch_len as f64);
            batch_sum = 0.0;
            in_batch = 0;
        }
        if accepted >= settings.min_accepted && proposals >= settings.min_proposals {
            break;
        }
        if proposals >= cap {
            return Err(WalkError::MixingFailure {
                n: len,
                accepted,
                proposals,
            });
        }
    }

    let mean_r2 = total / proposals as f64;
    let stderr_r2 = if batches.len() >= 2 {
        let k = batches.len() as f64;
        let mean_b = batches.iter().sum::<f64>() / k;
        let var_b = batches.iter().map(|b| (b - mean_b) * (b - mean_b)).sum::<f64>() / (k - 1.0);
        (var_b / k).sqrt()
    } else {
        f64::NAN
    };

    Ok(LengthEstimate {
        len,
        mean_r2,
        stderr_r2,
        accepted,
        proposals,
    })
}

/// Least-squares line through (xs, ys); returns (slope, intercept).
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Runs chains at all lengths (in parallel) and fits ln E[R^2] = a ln n + b.
pub fn estimate_nu(dim: usize, lengths: &[usize], settings: &ChainSettings) -> Result<NuEstimate> {
    if lengths.len() < 4 {
        return Err(WalkError::TooFewLengths {
            min: 4,
            got: lengths.len(),
        });
    }
    let per_length: Vec<LengthEstimate> = lengths
        .par_iter()
        .map(|&n| sample_r2(dim, n, settings))
        .collect::<Result<Vec<_>>>()?;

    let xs: Vec<f64> = per_length.iter().map(|e| (e.len as f64).ln()).collect();
    let ys: Vec<f64> = per_length.iter().map(|e| e.mean_r2.ln()).collect();
    let (slope, intercept) = linear_fit(&xs, &ys);

    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let ss_resid: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(&x, &y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum();
    let slope_stderr = (ss_resid / (m - 2.0) / sxx).sqrt();

    Ok(NuEstimate {
        dim,
        nu: slope / 2.0,
        nu_stderr: slope_stderr / 2.0,
        slope,
        intercept,
        per_length,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick_settings() -> ChainSettings {
        ChainSettings {
            burn_in_accepted: 500,
            min_accepted: 2_000,
            min_proposals: 4_000,
            seed: 42,
        }
    }

    #[test]
    fn fit_recovers_exact_line() {
        let xs = [1.0, 2.0, 3.0, 5.0, 8.0];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x - 2.0).collect();
        let (slope, intercept) = linear_fit(&xs, &ys);
        assert!((slope - 3.0).abs() < 1e-12);
        assert!((intercept + 2.0).abs() < 1e-12);
    }

    #[test]
    fn planar_exponent_smoke() {
        let est = estimate_nu(2, &[8, 16, 32, 64], &quick_settings()).unwrap();
        assert!(est.nu > 0.60 && est.nu < 0.90, "nu = {}", est.nu);
        for e in &est.per_length {
            assert!(e.accepted >= 2_000);
            assert!(e.mean_r2 > e.len as f64, "swollen walks beat diffusion");
        }
    }

    #[test]
    fn runs_are_deterministic() {
        let a = estimate_nu(2, &[8, 16, 32, 64], &quick_settings()).unwrap();
        let b = estimate_nu(2, &[8, 16, 32, 64], &quick_settings()).unwrap();
        assert_eq!(a.nu.to_bits(), b.nu.to_bits());
        for (x, y) in a.per_length.iter().zip(&b.per_length) {
            assert_eq!(x.mean_r2.to_bits(), y.mean_r2.to_bits());
            assert_eq!(x.proposals, y.proposals);
        }
    }

    #[test]
    fn too_few_lengths_is_rejected() {
        let err = estimate_nu(2, &[8, 16, 32], &quick_settings()).unwrap_err();
        assert!(matches!(err, WalkError::TooFewLengths { min: 4, got: 3 }));
    }
}
