//! Fourier-side operations on the torus.
//!
//! Every translation-invariant operator here is represented by its
//! multiplier on the plane-wave basis, with frequency vectors indexed
//! exactly like sites. The nearest-neighbor Laplacian `-Δ` has multiplier
//! `λ_k = Σ_i (2 - 2 cos(2π k_i / P))`, and fractional powers act as
//! `λ_k^{α/2}`. Kernel rows are recovered with an FFT per axis.

use crate::{LatticeError, LatticeField, Result, TorusLattice};
use num_complex::Complex64;
use rustfft::FftPlanner;

/// Eigenvalue of `-Δ` at frequency vector `k`.
pub fn laplacian_eigenvalue(torus: &TorusLattice, k: &[usize]) -> f64 {
    let p = torus.period() as f64;
    k.iter()
        .map(|&ki| 2.0 - 2.0 * (2.0 * std::f64::consts::PI * ki as f64 / p).cos())
        .sum()
}

/// All eigenvalues of `-Δ`, indexed like sites.
pub fn laplacian_spectrum(torus: &TorusLattice) -> Vec<f64> {
    let mut k = vec![0usize; torus.dim()];
    (0..torus.site_count())
        .map(|site| {
            torus.site_coords_into(site, &mut k);
            laplacian_eigenvalue(torus, &k)
        })
        .collect()
}

fn fft_all_axes(torus: &TorusLattice, data: &mut [Complex64]) {
    let p = torus.period();
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(p);
    let mut line = vec![Complex64::default(); p];
    for axis in 0..torus.dim() {
        let stride = p.pow(axis as u32);
        let block = stride * p;
        for outer in 0..torus.site_count() / block {
            for inner in 0..stride {
                let base = outer * block + inner;
                for i in 0..p {
                    line[i] = data[base + i * stride];
                }
                fft.process(&mut line);
                for i in 0..p {
                    data[base + i * stride] = line[i];
                }
            }
        }
    }
}

/// Kernel row `row[x] = (1/S) Σ_k m_k e^{2πi k·x / P}` of the operator with
/// real multipliers `m_k`. Requires `m_k = m_{-k}` so the row is real; the
/// residual imaginary part is checked against a fixed bound.
pub fn kernel_from_multipliers(torus: &TorusLattice, multipliers: &[f64]) -> Result<Vec<f64>> {
    if multipliers.len() != torus.site_count() {
        return Err(LatticeError::BadFieldLength {
            expected: torus.site_count(),
            actual: multipliers.len(),
        });
    }
    let mut data: Vec<Complex64> = multipliers
        .iter()
        .map(|&m| Complex64::new(m, 0.0))
        .collect();
    // For a symmetric multiplier array the forward transform equals the
    // inverse transform and is real.
    fft_all_axes(torus, &mut data);
    let scale = 1.0 / torus.site_count() as f64;
    let max_mag = multipliers.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    let mut row = Vec::with_capacity(data.len());
    for c in &data {
        debug_assert!(
            c.im.abs() <= 1e-9 * (max_mag + 1.0),
            "asymmetric multipliers produced imaginary kernel entry {}",
            c.im
        );
        row.push(c.re * scale);
    }
    Ok(row)
}

/// Kernel row of `(-Δ)^{α/2}` for `0 < α <= 2`. Off-diagonal entries are
/// non-positive; for `α = 2` the row reduces to the nearest-neighbor stencil.
pub fn fractional_laplacian_row(torus: &TorusLattice, alpha: f64) -> Result<Vec<f64>> {
    if !(alpha > 0.0 && alpha <= 2.0) || !alpha.is_finite() {
        return Err(LatticeError::BadAlpha(alpha));
    }
    let multipliers: Vec<f64> = laplacian_spectrum(torus)
        .into_iter()
        .map(|l| l.max(0.0).powf(alpha / 2.0))
        .collect();
    kernel_from_multipliers(torus, &multipliers)
}

/// Applies a translation-invariant kernel given by its row at the origin:
/// `(K f)_x = Σ_y row[y - x] f_y`, componentwise.
pub fn apply_translation_kernel(
    torus: &TorusLattice,
    row: &[f64],
    f: &LatticeField,
) -> Result<LatticeField> {
    f.check_torus(torus)?;
    if row.len() != torus.site_count() {
        return Err(LatticeError::BadFieldLength {
            expected: torus.site_count(),
            actual: row.len(),
        });
    }
    let ncomp = f.components();
    let mut out = LatticeField::zeros(*torus, ncomp);
    for x in 0..torus.site_count() {
        for y in 0..torus.site_count() {
            let w = row[torus.relative_site(x, y)];
            if w == 0.0 {
                continue;
            }
            for c in 0..ncomp {
                out.add(x, c, w * f.get(y, c));
            }
        }
    }
    Ok(out)
}
