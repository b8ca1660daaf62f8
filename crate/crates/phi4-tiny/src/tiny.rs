//! A torus small enough to integrate over, with its Laplacian as a dense
//! matrix. Periods 1 and 2 are legal: the neighbor sum then revisits the
//! same site, which the dense assembly handles without special cases.

use crate::{Phi4Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TinyTorus {
    periods: Vec<usize>,
}

impl TinyTorus {
    pub fn new(periods: &[usize]) -> Result<Self> {
        if periods.is_empty() {
            return Err(Phi4Error::BadPeriod(0));
        }
        let mut sites = 1usize;
        for &p in periods {
            if p == 0 {
                return Err(Phi4Error::BadPeriod(p));
            }
            sites *= p;
        }
        if sites > 4 {
            return Err(Phi4Error::TooManySites(sites));
        }
        Ok(TinyTorus {
            periods: periods.to_vec(),
        })
    }

    pub fn dim(&self) -> usize {
        self.periods.len()
    }

    pub fn periods(&self) -> &[usize] {
        &self.periods
    }

    pub fn site_count(&self) -> usize {
        self.periods.iter().product()
    }

    /// Row-major with axis 0 fastest, matching the larger lattice type.
    pub fn site_index(&self, coords: &[usize]) -> usize {
        assert_eq!(coords.len(), self.dim());
        let mut idx = 0;
        let mut stride = 1;
        for (&c, &p) in coords.iter().zip(&self.periods) {
            assert!(c < p);
            idx += c * stride;
            stride *= p;
        }
        idx
    }

    pub fn site_coords(&self, site: usize) -> Vec<usize> {
        let mut rest = site;
        let mut out = Vec::with_capacity(self.dim());
        for &p in &self.periods {
            out.push(rest % p);
            rest /= p;
        }
        out
    }

    /// Nearest-neighbor Laplacian as a flattened sites x sites matrix:
    /// (-D phi)_x = sum over axes of 2 phi_x - phi_{x+e} - phi_{x-e}.
    pub fn laplacian(&self) -> Vec<f64> {
        let s = self.site_count();
        let mut out = vec![0.0; s * s];
        for site in 0..s {
            let coords = self.site_coords(site);
            for (axis, &p) in self.periods.iter().enumerate() {
                let mut up = coords.clone();
                up[axis] = (coords[axis] + 1) % p;
                let mut down = coords.clone();
                down[axis] = (coords[axis] + p - 1) % p;
                out[site * s + site] += 2.0;
                out[site * s + self.site_index(&up)] -= 1.0;
                out[site * s + self.site_index(&down)] -= 1.0;
            }
        }
        out
    }

    /// Fractional power (-D)^(alpha/2) assembled from the plane-wave
    /// eigenbasis; alpha = 2 reproduces the dense Laplacian.
    pub fn fractional_laplacian(&self, alpha: f64) -> Result<Vec<f64>> {
        if !(alpha > 0.0 && alpha <= 2.0) || !alpha.is_finite() {
            return Err(Phi4Error::BadAlpha(alpha));
        }
        let s = self.site_count();
        let mut out = vec![0.0; s * s];
        let mut k = vec![0usize; self.dim()];
        loop {
            let lambda: f64 = k
                .iter()
                .zip(&self.periods)
                .map(|(&ka, &p)| 2.0 - 2.0 * (std::f64::consts::TAU * ka as f64 / p as f64).cos())
                .sum();
            let powered = lambda.max(0.0).powf(alpha / 2.0);
            for x in 0..s {
                let cx = self.site_coords(x);
                for y in 0..s {
                    let cy = self.site_coords(y);
                    let phase: f64 = k
                        .iter()
                        .zip(cx.iter().zip(&cy))
                        .zip(&self.periods)
                        .map(|((&ka, (&xa, &ya)), &p)| {
                            std::f64::consts::TAU * ka as f64 * (xa as f64 - ya as f64) / p as f64
                        })
                        .sum();
                    out[x * s + y] += powered * phase.cos() / s as f64;
                }
            }
            let mut axis = 0;
            loop {
                if axis == self.dim() {
                    return Ok(out);
                }
                k[axis] += 1;
                if k[axis] < self.periods[axis] {
                    break;
                }
                k[axis] = 0;
                axis += 1;
            }
        }
    }
}
