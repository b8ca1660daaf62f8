//! Midpoint tensor grids over R^{2M} and coordinate blocks cut from them.
//!
//! Every axis shares one node set, mirrored around zero so the grid is
//! exactly symmetric under sign flips. Axis 2x holds u_x and axis 2x+1
//! holds v_x; points are enumerated with axis 0 fastest. Large grids are
//! never materialized whole: they are walked in slabs that vary the first
//! two axes while the slab index fixes the rest.

use crate::{Result, SusyError};

/// Upper bound on the number of grid points a single evaluation may touch.
pub const POINT_BUDGET: f64 = 1e8;

/// Cutoffs derived from a potential put the per-site exponent at this value
/// on the boundary, far below double precision relevance.
const POTENTIAL_REACH: f64 = 40.0;

pub(crate) fn check_potential(g: f64, nu: f64) -> Result<()> {
    let confining = g > 0.0 || (g == 0.0 && nu > 0.0);
    if !(g.is_finite() && nu.is_finite() && confining) {
        return Err(SusyError::BadPotential { g, nu });
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct QuadratureGrid {
    sites: usize,
    nodes: Vec<f64>,
    step: f64,
    cutoff: f64,
}

impl QuadratureGrid {
    pub fn with_cutoff(sites: usize, cutoff: f64, nodes_per_axis: usize) -> Result<Self> {
        if sites == 0 || sites > crate::MAX_SITES {
            return Err(SusyError::BadSiteCount(sites));
        }
        if nodes_per_axis < 4 || nodes_per_axis % 2 != 0 {
            return Err(SusyError::BadNodes(nodes_per_axis));
        }
        if !(cutoff.is_finite() && cutoff > 0.0) {
            return Err(SusyError::BadCutoff(cutoff));
        }
        let points = (nodes_per_axis as f64).powi(2 * sites as i32);
        if points > POINT_BUDGET {
            return Err(SusyError::TooManyPoints {
                points,
                budget: POINT_BUDGET,
            });
        }
        let half = nodes_per_axis / 2;
        let step = cutoff / half as f64;
        let mut nodes = vec![0.0; nodes_per_axis];
        for i in 0..half {
            let x = (i as f64 + 0.5) * step;
            nodes[half + i] = x;
            nodes[half - 1 - i] = -x;
        }
        Ok(Self {
            sites,
            nodes,
            step,
            cutoff,
        })
    }

    /// Grid sized for the weight exp(-sum_x (g T_x^2 + nu T_x)) with
    /// T_x = |phi_x|^2: the cutoff radius solves g R^4 + nu R^2 = 40.
    pub fn for_weight(sites: usize, g: f64, nu: f64, nodes_per_axis: usize) -> Result<Self> {
        check_potential(g, nu)?;
        let t = if g > 0.0 {
            (-nu + (nu * nu + 4.0 * g * POTENTIAL_REACH).sqrt()) / (2.0 * g)
        } else {
            POTENTIAL_REACH / nu
        };
        Self::with_cutoff(sites, t.sqrt(), nodes_per_axis)
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn axes(&self) -> usize {
        2 * self.sites
    }

    pub fn nodes_per_axis(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn total_points(&self) -> usize {
        self.nodes.len().pow(2 * self.sites as u32)
    }

    /// Lebesgue measure of one grid cell.
    pub fn cell_weight(&self) -> f64 {
        self.step.powi(2 * self.sites as i32)
    }

    pub fn slab_points(&self) -> usize {
        self.nodes.len() * self.nodes.len()
    }

    pub fn slab_count(&self) -> usize {
        self.total_points() / self.slab_points()
    }

    /// True when the full-grid point index touches the outermost node layer
    /// on any axis.
    pub fn is_boundary_point(&self, index: usize) -> bool {
        let q = self.nodes.len();
        let mut rest = index;
        for _ in 0..self.axes() {
            let digit = rest % q;
            if digit == 0 || digit == q - 1 {
                return true;
            }
            rest /= q;
        }
        false
    }

    /// Boundary test for the axes a slab index fixes.
    pub fn slab_touches_boundary(&self, slab: usize) -> bool {
        let q = self.nodes.len();
        let mut rest = slab;
        for _ in 2..self.axes() {
            let digit = rest % q;
            if digit == 0 || digit == q - 1 {
                return true;
            }
            rest /= q;
        }
        false
    }

    /// Boundary test for the two axes that vary inside a slab.
    pub fn point_in_slab_on_boundary(&self, point: usize) -> bool {
        let q = self.nodes.len();
        let (a, b) = (point % q, point / q);
        a == 0 || a == q - 1 || b == 0 || b == q - 1
    }

    pub fn full_block(&self) -> CoordinateBlock {
        let axes = self.axes();
        let q = self.nodes.len();
        let total = self.total_points();
        let mut coords = vec![0.0; total * axes];
        for p in 0..total {
            let mut rest = p;
            for axis in 0..axes {
                coords[p * axes + axis] = self.nodes[rest % q];
                rest /= q;
            }
        }
        CoordinateBlock {
            sites: self.sites,
            points: total,
            coords,
        }
    }

    /// Block holding slab `slab`: axes 0 and 1 run over the full node set,
    /// the rest are decoded from the slab index, axis 2 fastest. Global
    /// point index = in-slab index + slab * slab_points().
    pub fn slab_block(&self, slab: usize) -> CoordinateBlock {
        let axes = self.axes();
        let q = self.nodes.len();
        let mut outer = [0.0; 4];
        let mut rest = slab;
        for axis in 2..axes {
            outer[axis - 2] = self.nodes[rest % q];
            rest /= q;
        }
        let points = self.slab_points();
        let mut coords = vec![0.0; points * axes];
        for p in 0..points {
            coords[p * axes] = self.nodes[p % q];
            coords[p * axes + 1] = self.nodes[p / q];
            for axis in 2..axes {
                coords[p * axes + axis] = outer[axis - 2];
            }
        }
        CoordinateBlock {
            sites: self.sites,
            points,
            coords,
        }
    }
}

/// A list of points in R^{2M}, point-major.
#[derive(Clone, Debug)]
pub struct CoordinateBlock {
    sites: usize,
    points: usize,
    coords: Vec<f64>,
}

impl CoordinateBlock {
    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn coord(&self, point: usize, axis: usize) -> f64 {
        self.coords[point * 2 * self.sites + axis]
    }

    pub fn u(&self, point: usize, site: usize) -> f64 {
        self.coord(point, 2 * site)
    }

    pub fn v(&self, point: usize, site: usize) -> f64 {
        self.coord(point, 2 * site + 1)
    }

    /// phi_x = u_x + i v_x.
    pub fn phi(&self, point: usize, site: usize) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.u(point, site), self.v(point, site))
    }

    /// phibar_x = u_x - i v_x.
    pub fn phi_bar(&self, point: usize, site: usize) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.u(point, site), -self.v(point, site))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_are_bitwise_mirror_symmetric() {
        let grid = QuadratureGrid::with_cutoff(1, 2.5, 10).unwrap();
        let nodes = grid.nodes();
        for i in 0..nodes.len() {
            assert_eq!(nodes[i], -nodes[nodes.len() - 1 - i]);
        }
        assert_eq!(nodes.len(), 10);
        assert!(nodes[9] < 2.5 && nodes[9] > 2.0);
        assert!((grid.step() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn weight_cutoff_lands_on_the_reach() {
        for (g, nu) in [(1.0, 1.0), (0.6, -0.3), (0.0, 0.7)] {
            let grid = QuadratureGrid::for_weight(2, g, nu, 8).unwrap();
            let t = grid.cutoff() * grid.cutoff();
            assert!((g * t * t + nu * t - 40.0).abs() < 1e-9, "g={g} nu={nu}");
        }
    }

    #[test]
    fn slab_decomposition_matches_the_full_enumeration() {
        let grid = QuadratureGrid::with_cutoff(2, 1.0, 4).unwrap();
        let full = grid.full_block();
        let mut seen_boundary = 0;
        for slab in 0..grid.slab_count() {
            let block = grid.slab_block(slab);
            for p in 0..block.points() {
                let global = slab * grid.slab_points() + p;
                for axis in 0..grid.axes() {
                    assert_eq!(block.coord(p, axis), full.coord(global, axis));
                }
                let direct = grid.slab_touches_boundary(slab)
                    || grid.point_in_slab_on_boundary(p);
                assert_eq!(direct, grid.is_boundary_point(global));
                if direct {
                    seen_boundary += 1;
                }
            }
        }
        // 4^4 points, interior is 2^4.
        assert_eq!(seen_boundary, 256 - 16);
    }

    #[test]
    fn complex_coordinates_pair_the_axes() {
        let grid = QuadratureGrid::with_cutoff(2, 2.0, 4).unwrap();
        let block = grid.full_block();
        for p in [0, 7, 100, 255] {
            for site in 0..2 {
                let phi = block.phi(p, site);
                assert_eq!(phi.re, block.coord(p, 2 * site));
                assert_eq!(phi.im, block.coord(p, 2 * site + 1));
                assert_eq!(block.phi_bar(p, site), phi.conj());
            }
        }
    }

    #[test]
    fn invalid_grids_are_rejected() {
        assert!(matches!(
            QuadratureGrid::with_cutoff(0, 1.0, 8),
            Err(SusyError::BadSiteCount(0))
        ));
        assert!(matches!(
            QuadratureGrid::with_cutoff(1, 1.0, 7),
            Err(SusyError::BadNodes(7))
        ));
        assert!(matches!(
            QuadratureGrid::with_cutoff(1, 1.0, 2),
            Err(SusyError::BadNodes(2))
        ));
        assert!(matches!(
            QuadratureGrid::with_cutoff(1, -1.0, 8),
            Err(SusyError::BadCutoff(_))
        ));
        assert!(matches!(
            QuadratureGrid::with_cutoff(3, 3.0, 46),
            Err(SusyError::TooManyPoints { .. })
        ));
        assert!(matches!(
            QuadratureGrid::for_weight(1, 0.0, -0.5, 8),
            Err(SusyError::BadPotential { .. })
        ));
        assert!(matches!(
            QuadratureGrid::for_weight(1, -0.1, 1.0, 8),
            Err(SusyError::BadPotential { .. })
        ));
    }
}
