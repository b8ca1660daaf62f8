//! Smooth dyadic slicing of the covariance multipliers.
//!
//! Every nonzero mode gets a scale coordinate u = -log_L(lambda) / 2, so
//! that modes of wavelength L^j sit near u = j; the zero mode sits at
//! u = +infinity. Theta_j is a monotone smooth step rising across
//! [j + 1/2 - H, j + 1/2 + H] (cosine-squared ramp, H = 0.4), and the
//! window of scale j is the telescoping difference
//!
//!   W_1 = 1 - Theta_1,   W_j = Theta_{j-1} - Theta_j,   W_N = Theta_{N-1},
//!
//! which sums to one exactly and keeps every piece nonnegative, hence
//! positive semidefinite. Windows below the top do not depend on N, so
//! adding scales never changes the early pieces. The zero mode lands in
//! W_N alone. All constants here are fixed so that the flow coefficients
//! downstream are reproducible bit for bit.

use crate::covariance::Covariance;
use crate::{FieldError, Result};
use lattice_core::kernel_from_multipliers;

/// Half-width of the cosine-squared ramp in scale units.
pub const RAMP_HALF_WIDTH: f64 = 0.15;

/// Largest materialized decomposition (pieces times sites).
const MAX_MATERIALIZED: usize = 1 << 24;

/// Scale coordinate of a Laplacian eigenvalue; +infinity for the zero mode.
pub fn scale_coordinate(l: usize, lambda: f64) -> f64 {
    if lambda <= 0.0 {
        f64::INFINITY
    } else {
        -lambda.ln() / (2.0 * (l as f64).ln())
    }
}

/// 0 below, 1 above, sin^2 ramp across [0, 1].
fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let s = (std::f64::consts::FRAC_PI_2 * x).sin();
        s * s
    }
}

fn theta(j: usize, u: f64) -> f64 {
    let center = j as f64 + 0.5;
    smooth_step((u - (center - RAMP_HALF_WIDTH)) / (2.0 * RAMP_HALF_WIDTH))
}

/// Combined weight of scales 1..=j at scale coordinate u; telescopes to
/// 1 - Theta_j below the top and to 1 at the top.
pub(crate) fn cumulative_window(n_scales: usize, j: usize, u: f64) -> f64 {
    debug_assert!(j >= 1 && j <= n_scales);
    if j == n_scales {
        1.0
    } else {
        1.0 - theta(j, u)
    }
}

/// Weight of scale j (1-based) among n_scales at scale coordinate u.
pub fn window_value(n_scales: usize, j: usize, u: f64) -> f64 {
    debug_assert!(j >= 1 && j <= n_scales);
    if n_scales == 1 {
        1.0
    } else if j == 1 {
        1.0 - theta(1, u)
    } else if j == n_scales {
        theta(n_scales - 1, u)
    } else {
        theta(j - 1, u) - theta(j, u)
    }
}

#[derive(Clone, Debug)]
pub struct ScalePiece {
    /// 1-based scale index.
    pub scale: usize,
    pub multipliers: Vec<f64>,
    pub row: Vec<f64>,
}

#[derive(Debug)]
pub struct CovarianceDecomposition {
    base: Covariance,
    l: usize,
    pieces: Vec<ScalePiece>,
    /// Per scale, the fraction of the piece's trace carried by modes whose
    /// scale coordinate falls in the piece's own unit bin.
    locality: Vec<f64>,
}

impl CovarianceDecomposition {
    pub fn build(base: &Covariance, l: usize, n_scales: usize) -> Result<Self> {
        if l < 2 {
            return Err(FieldError::BadScaleBase(l));
        }
        if n_scales == 0 {
            return Err(FieldError::NoScales);
        }
        let sites = base.torus().site_count();
        if n_scales.saturating_mul(sites) > MAX_MATERIALIZED {
            return Err(FieldError::DecompositionTooLarge {
                pieces: n_scales,
                sites,
            });
        }

        let us: Vec<f64> = lattice_core::laplacian_spectrum(base.torus())
            .into_iter()
            .map(|lambda| scale_coordinate(l, lambda))
            .collect();

        let mut pieces = Vec::with_capacity(n_scales);
        let mut locality = Vec::with_capacity(n_scales);
        let mut sum_check = vec![0.0f64; sites];
        for j in 1..=n_scales {
            let multipliers: Vec<f64> = base
                .multipliers()
                .iter()
                .zip(&us)
                .map(|(&d, &u)| d * window_value(n_scales, j, u))
                .collect();
            let min = multipliers.iter().fold(f64::INFINITY, |m, &v| m.min(v));
            if min < -1e-10 {
                return Err(FieldError::PsdViolation { scale: j, min });
            }
            let mut in_bin = 0.0;
            let mut trace = 0.0;
            for (&m, &u) in multipliers.iter().zip(&us) {
                trace += m;
                let lo = if j == 1 { f64::NEG_INFINITY } else { j as f64 - 0.5 };
                let hi = if j == n_scales {
                    f64::INFINITY
                } else {
                    j as f64 + 0.5
                };
                if u >= lo && u < hi || j == n_scales && u >= lo {
                    in_bin += m;
                }
            }
            locality.push(if trace > 0.0 { in_bin / trace } else { 1.0 });
            for (acc, &m) in sum_check.iter_mut().zip(&multipliers) {
                *acc += m;
            }
            let row = kernel_from_multipliers(base.torus(), &multipliers)?;
            pieces.push(ScalePiece {
                scale: j,
                multipliers,
                row,
            });
        }

        let worst = sum_check
            .iter()
            .zip(base.multipliers())
            .map(|(got, want)| (got - want).abs())
            .fold(0.0f64, f64::max);
        if worst > 1e-9 {
            return Err(FieldError::ReconstructionFailure(worst));
        }

        Ok(Self {
            base: base.clone(),
            l,
            pieces,
            locality,
        })
    }

    pub fn base(&self) -> &Covariance {
        &self.base
    }

    pub fn scale_base(&self) -> usize {
        self.l
    }

    pub fn n_scales(&self) -> usize {
        self.pieces.len()
    }

    pub fn pieces(&self) -> &[ScalePiece] {
        &self.pieces
    }

    /// Piece of 1-based scale j.
    pub fn piece(&self, j: usize) -> Result<&ScalePiece> {
        self.pieces.get(j.wrapping_sub(1)).ok_or(FieldError::BadScaleIndex {
            j,
            max: self.pieces.len(),
        })
    }

    pub fn locality_fractions(&self) -> &[f64] {
        &self.locality
    }

    /// RMS of the scale-j fluctuation field, sqrt of the kernel diagonal.
    pub fn piece_rms(&self, j: usize) -> Result<f64> {
        Ok(self.piece(j)?.row[0].max(0.0).sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use lattice_core::TorusLattice;

    fn ring_cov(period: usize, alpha: f64, m2: f64) -> Covariance {
        let torus = TorusLattice::new(1, period, 1).unwrap();
        Covariance::build(torus, alpha, m2).unwrap()
    }

    #[test]
    fn windows_form_a_partition_of_unity() {
        for n in [1usize, 2, 5, 9] {
            for i in -40..200 {
                let u = i as f64 * 0.1;
                let total: f64 = (1..=n).map(|j| window_value(n, j, u)).sum();
                assert!((total - 1.0).abs() < 1e-14, "n={n}, u={u}: {total}");
                for j in 1..=n {
                    assert!(window_value(n, j, u) >= 0.0);
                }
            }
            let total_inf: f64 = (1..=n).map(|j| window_value(n, j, f64::INFINITY)).sum();
            assert_eq!(total_inf, 1.0);
            assert_eq!(window_value(n, n, f64::INFINITY), 1.0);
        }
    }

    #[test]
    fn pieces_sum_back_to_the_covariance() {
        let cov = ring_cov(64, 0.8, 0.01);
        let dec = CovarianceDecomposition::build(&cov, 2, 6).unwrap();
        for x in 0..64 {
            let total: f64 = dec.pieces().iter().map(|p| p.row[x]).sum();
            assert!(
                (total - cov.row()[x]).abs() < 1e-9,
                "site {x}: {total} vs {}",
                cov.row()[x]
            );
        }
    }

    #[test]
    fn single_scale_decomposition_is_the_covariance_itself() {
        let cov = ring_cov(16, 1.5, 0.3);
        let dec = CovarianceDecomposition::build(&cov, 2, 1).unwrap();
        assert_eq!(dec.n_scales(), 1);
        for (a, b) in dec.piece(1).unwrap().row.iter().zip(cov.row()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn pieces_are_spectrally_nonnegative() {
        let cov = ring_cov(128, 0.55, 1e-4);
        let dec = CovarianceDecomposition::build(&cov, 2, 7).unwrap();
        for p in dec.pieces() {
            for &m in &p.multipliers {
                assert!(m >= 0.0);
            }
        }
    }

    #[test]
    fn traces_concentrate_in_their_own_scale_bins() {
        let cov = ring_cov(256, 0.55, 1e-6);
        let dec = CovarianceDecomposition::build(&cov, 2, 8).unwrap();
        for (j, &f) in dec.locality_fractions().iter().enumerate() {
            assert!(
                f >= 0.9,
                "scale {} keeps only {f:.3} of its trace in its bin",
                j + 1
            );
        }
    }

    #[test]
    fn fluctuation_size_follows_the_scaling_prediction() {
        // RMS of zeta_j should track L^(-j (d - alpha) / 2) loosely over
        // mid-range scales; the constant is not pinned down.
        let d = 1.0;
        let alpha = 0.55;
        let cov = ring_cov(1024, alpha, 1e-8);
        let dec = CovarianceDecomposition::build(&cov, 2, 10).unwrap();
        for j in 3..=7 {
            let rms = dec.piece_rms(j).unwrap();
            let predicted = (2.0f64).powf(-(j as f64) * (d - alpha) / 2.0);
            let ratio = rms / predicted;
            assert!(
                ratio > 1.0 / 3.0 && ratio < 3.0,
                "scale {j}: rms {rms:.4e} vs predicted {predicted:.4e} (ratio {ratio:.3})"
            );
        }
    }

    #[test]
    fn oversized_requests_are_refused() {
        let cov = ring_cov(64, 1.0, 0.1);
        assert!(matches!(
            CovarianceDecomposition::build(&cov, 1, 4),
            Err(FieldError::BadScaleBase(1))
        ));
        assert!(matches!(
            CovarianceDecomposition::build(&cov, 2, 0),
            Err(FieldError::NoScales)
        ));
        assert!(matches!(
            CovarianceDecomposition::build(&cov, 2, usize::MAX / 2),
            Err(FieldError::DecompositionTooLarge { .. })
        ));
    }
}
