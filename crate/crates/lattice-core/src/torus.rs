//! The discrete torus `Z_P^d` with `P = base^scales`, plus the
//! nearest-neighbor Laplacian acting on fields over it.

use crate::{LatticeError, LatticeField, Result};

/// Discrete torus of dimension `dim` with side `period = base^scales`.
///
/// Sites are indexed row-major with axis 0 fastest: for coordinates
/// `c = (c_0, .., c_{d-1})` the index is `sum_i c_i * period^i`.
/// Periods below 3 are rejected so that the two neighbors of a site along an
/// axis are always distinct.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TorusLattice {
    dim: usize,
    base: usize,
    scales: usize,
    period: usize,
    sites: usize,
}

impl TorusLattice {
    pub fn new(dim: usize, base: usize, scales: usize) -> Result<Self> {
        if dim == 0 || dim > 5 {
            return Err(LatticeError::BadDimension(dim));
        }
        if base < 2 || scales == 0 {
            return Err(LatticeError::PeriodTooSmall {
                base,
                scales,
                period: 0,
            });
        }
        let period = base
            .checked_pow(scales as u32)
            .ok_or(LatticeError::SizeOverflow)?;
        if period < 3 {
            return Err(LatticeError::PeriodTooSmall {
                base,
                scales,
                period,
            });
        }
        let sites = period
            .checked_pow(dim as u32)
            .ok_or(LatticeError::SizeOverflow)?;
        // Practical guard: site-indexed vectors must stay allocatable.
        if sites > 1 << 28 {
            return Err(LatticeError::SizeOverflow);
        }
        Ok(Self {
            dim,
            base,
            scales,
            period,
            sites,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn scales(&self) -> usize {
        self.scales
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn site_count(&self) -> usize {
        self.sites
    }

    pub fn site_index(&self, coords: &[usize]) -> usize {
        debug_assert_eq!(coords.len(), self.dim);
        let mut idx = 0;
        for a in (0..self.dim).rev() {
            debug_assert!(coords[a] < self.period);
            idx = idx * self.period + coords[a];
        }
        idx
    }

    pub fn site_coords(&self, site: usize) -> Vec<usize> {
        let mut c = vec![0; self.dim];
        self.site_coords_into(site, &mut c);
        c
    }

    pub fn site_coords_into(&self, site: usize, out: &mut [usize]) {
        debug_assert!(site < self.sites);
        let mut rest = site;
        for a in 0..self.dim {
            out[a] = rest % self.period;
            rest /= self.period;
        }
    }

    /// Steps `site` by `delta` along `axis`, wrapping around the period.
    pub fn translate(&self, site: usize, axis: usize, delta: i64) -> usize {
        debug_assert!(axis < self.dim);
        let stride = self.period.pow(axis as u32);
        let coord = (site / stride) % self.period;
        let p = self.period as i64;
        let wrapped = (coord as i64 + delta).rem_euclid(p) as usize;
        site - coord * stride + wrapped * stride
    }

    /// All `2 * dim` nearest neighbors of `site`.
    pub fn neighbors(&self, site: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(2 * self.dim);
        for axis in 0..self.dim {
            out.push(self.translate(site, axis, 1));
            out.push(self.translate(site, axis, -1));
        }
        out
    }

    /// Periodic distance of two coordinates along one axis.
    pub fn axis_distance(&self, a: usize, b: usize) -> usize {
        let d = a.abs_diff(b) % self.period;
        d.min(self.period - d)
    }

    pub fn distance_l1(&self, x: usize, y: usize) -> usize {
        let (mut cx, mut cy) = (vec![0; self.dim], vec![0; self.dim]);
        self.site_coords_into(x, &mut cx);
        self.site_coords_into(y, &mut cy);
        (0..self.dim)
            .map(|a| self.axis_distance(cx[a], cy[a]))
            .sum()
    }

    pub fn distance_linf(&self, x: usize, y: usize) -> usize {
        let (mut cx, mut cy) = (vec![0; self.dim], vec![0; self.dim]);
        self.site_coords_into(x, &mut cx);
        self.site_coords_into(y, &mut cy);
        (0..self.dim)
            .map(|a| self.axis_distance(cx[a], cy[a]))
            .max()
            .unwrap_or(0)
    }

    /// Relative displacement index `y - x` (mod period per axis), usable as an
    /// offset into translation-invariant kernel rows.
    pub fn relative_site(&self, x: usize, y: usize) -> usize {
        let (mut cx, mut cy) = (vec![0; self.dim], vec![0; self.dim]);
        self.site_coords_into(x, &mut cx);
        self.site_coords_into(y, &mut cy);
        let rel: Vec<usize> = (0..self.dim)
            .map(|a| (cy[a] + self.period - cx[a]) % self.period)
            .collect();
        self.site_index(&rel)
    }
}

/// Nearest-neighbor Laplacian: `(Δf)_x = Σ_{|e|=1} (f_{x+e} - f_x)`,
/// applied componentwise. Row sums vanish, so constants map to zero.
pub fn laplacian_apply(torus: &TorusLattice, f: &LatticeField) -> Result<LatticeField> {
    f.check_torus(torus)?;
    let ncomp = f.components();
    let mut out = LatticeField::zeros(*torus, ncomp);
    for site in 0..torus.site_count() {
        for axis in 0..torus.dim() {
            let up = torus.translate(site, axis, 1);
            let down = torus.translate(site, axis, -1);
            for c in 0..ncomp {
                let v = f.get(up, c) + f.get(down, c) - 2.0 * f.get(site, c);
                out.add(site, c, v);
            }
        }
    }
    Ok(out)
}
