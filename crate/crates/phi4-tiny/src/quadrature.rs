//! Tensor-product midpoint quadrature over field configurations.
//!
//! Each coordinate runs over an even, symmetric midpoint grid on
//! [-cutoff, cutoff]. The integrands are smooth and vanish to machine
//! precision at the cutoff, so the midpoint rule converges spectrally;
//! the constant midpoint weight cancels in every Boltzmann ratio and is
//! never applied. Outer grid slices are integrated in parallel and
//! combined in slice order with compensated sums, so results do not
//! depend on thread scheduling.

use crate::{Phi4Error, Result, WORK_CAP};
use rayon::prelude::*;

#[derive(Clone, Debug)]
pub struct QuadratureSpec {
    nodes: usize,
    cutoff: f64,
}

impl QuadratureSpec {
    pub fn new(nodes: usize, cutoff: f64) -> Result<Self> {
        if nodes < 4 || nodes % 2 != 0 {
            return Err(Phi4Error::BadNodes(nodes));
        }
        if !(cutoff > 0.0) || !cutoff.is_finite() {
            return Err(Phi4Error::BadCutoff(cutoff));
        }
        Ok(QuadratureSpec { nodes, cutoff })
    }

    /// Places the cutoff where the single-site weight e^-V has decayed to
    /// about e^-40, solving (g/4) R^4 + (nu/2) R^2 = 40 for R^2.
    pub fn for_potential(g: f64, nu: f64, nodes: usize) -> Result<Self> {
        check_potential(g, nu)?;
        let r2 = if g > 0.0 {
            (-nu / 2.0 + ((nu / 2.0) * (nu / 2.0) + 40.0 * g).sqrt()) / (g / 2.0)
        } else {
            80.0 / nu
        };
        QuadratureSpec::new(nodes, r2.sqrt())
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    /// Midpoint nodes, mirrored from the positive half so the grid is
    /// symmetric about zero to the last bit.
    pub fn points(&self) -> Vec<f64> {
        let h = 2.0 * self.cutoff / self.nodes as f64;
        let half = self.nodes / 2;
        let mut out = vec![0.0; self.nodes];
        for i in 0..half {
            let x = (i as f64 + 0.5) * h;
            out[half + i] = x;
            out[half - 1 - i] = -x;
        }
        out
    }

    /// Checks the one-dimensional integral of e^-V against a grid with
    /// twice the nodes; drift beyond 1e-8 means the spec is too coarse
    /// for this potential.
    pub fn verify_for(&self, g: f64, nu: f64) -> Result<()> {
        check_potential(g, nu)?;
        let refined = QuadratureSpec::new(self.nodes * 2, self.cutoff)?;
        let coarse = self.weight_integral(g, nu);
        let fine = refined.weight_integral(g, nu);
        let drift = (coarse - fine).abs() / fine.abs();
        if !(drift < 1e-8) {
            return Err(Phi4Error::GridTooCoarse { drift });
        }
        Ok(())
    }

    fn weight_integral(&self, g: f64, nu: f64) -> f64 {
        let h = 2.0 * self.cutoff / self.nodes as f64;
        let mut sum = KahanSum::default();
        for x in self.points() {
            sum.add((-g / 4.0 * x.powi(4) - nu / 2.0 * x * x).exp());
        }
        sum.value() * h
    }
}

pub(crate) fn check_potential(g: f64, nu: f64) -> Result<()> {
    let ok = (g > 0.0 || (g == 0.0 && nu > 0.0)) && g.is_finite() && nu.is_finite();
    if ok {
        Ok(())
    } else {
        Err(Phi4Error::BadPotential { g, nu })
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub fn add(&mut self, term: f64) {
        let y = term - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Averages the observables against the Boltzmann weight e^-energy over
/// the full tensor grid in `dim` coordinates: returns the weight sum and
/// one weighted sum per observable slot. `energy_floor` is subtracted
/// inside the exponential to keep weights in range; it cancels in ratios.
pub(crate) fn tensor_accumulate(
    spec: &QuadratureSpec,
    dim: usize,
    slots: usize,
    energy_floor: f64,
    energy: impl Fn(&[f64]) -> f64 + Sync,
    observe: impl Fn(&[f64], &mut [f64]) + Sync,
) -> Result<(f64, Vec<f64>)> {
    let work = (spec.nodes as f64).powi(dim as i32);
    if !(work <= WORK_CAP) {
        return Err(Phi4Error::TooMuchWork {
            nodes: spec.nodes,
            dim,
        });
    }
    let points = spec.points();
    let partials: Vec<(f64, Vec<f64>)> = (0..spec.nodes)
        .into_par_iter()
        .map(|outer| {
            let mut z = KahanSum::default();
            let mut sums = vec![KahanSum::default(); slots];
            let mut coords = vec![0.0f64; dim];
            let mut obs = vec![0.0f64; slots];
            coords[dim - 1] = points[outer];
            let mut digits = vec![0usize; dim - 1];
            loop {
                for (c, &d) in coords.iter_mut().zip(&digits) {
                    *c = points[d];
                }
                let w = (energy_floor - energy(&coords)).exp();
                z.add(w);
                if slots > 0 {
                    observe(&coords, &mut obs);
                    for (s, &o) in sums.iter_mut().zip(&obs) {
                        s.add(w * o);
                    }
                }
                let mut axis = 0;
                loop {
                    if axis == dim - 1 {
                        return (z.value(), sums.iter().map(|s| s.value()).collect());
                    }
                    digits[axis] += 1;
                    if digits[axis] < spec.nodes {
                        break;
                    }
                    digits[axis] = 0;
                    axis += 1;
                }
            }
        })
        .collect();

    let mut z = KahanSum::default();
    let mut sums = vec![KahanSum::default(); slots];
    for (pz, ps) in &partials {
        z.add(*pz);
        for (s, &p) in sums.iter_mut().zip(ps) {
            s.add(p);
        }
    }
    Ok((z.value(), sums.iter().map(|s| s.value()).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn the_grid_is_symmetric_about_zero() {
        let spec = QuadratureSpec::new(10, 3.0).unwrap();
        let pts = spec.points();
        for (i, &x) in pts.iter().enumerate() {
            assert_eq!(x, -pts[pts.len() - 1 - i]);
        }
    }

    #[test]
    fn gaussian_normalization_is_reproduced() {
        let spec = QuadratureSpec::for_potential(0.0, 1.0, 80).unwrap();
        let got = spec.weight_integral(0.0, 1.0);
        let want = (std::f64::consts::TAU).sqrt();
        assert!((got - want).abs() < 1e-10, "{got} vs {want}");
    }

    #[test]
    fn cutoff_lands_where_the_weight_is_negligible() {
        for (g, nu) in [(0.5, 0.3), (0.5, -0.8), (0.0, 0.7), (2.0, 0.0)] {
            let spec = QuadratureSpec::for_potential(g, nu, 80).unwrap();
            let r = spec.cutoff();
            let v = g / 4.0 * r.powi(4) + nu / 2.0 * r * r;
            assert!((v - 40.0).abs() < 1e-9, "V({r}) = {v} for ({g}, {nu})");
        }
    }

    #[test]
    fn refinement_check_accepts_healthy_grids_and_flags_coarse_ones() {
        let spec = QuadratureSpec::for_potential(0.5, 0.3, 80).unwrap();
        spec.verify_for(0.5, 0.3).unwrap();
        let coarse = QuadratureSpec::new(6, spec.cutoff()).unwrap();
        assert!(matches!(
            coarse.verify_for(0.5, 0.3),
            Err(Phi4Error::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn accumulator_matches_a_plain_double_loop() {
        let spec = QuadratureSpec::new(12, 2.0).unwrap();
        let energy = |c: &[f64]| 0.5 * (c[0] * c[0] + c[1] * c[1]) + 0.3 * c[0] * c[1];
        let (z, sums) = tensor_accumulate(&spec, 2, 1, 0.0, energy, |c, out| {
            out[0] = c[0] * c[1];
        })
        .unwrap();
        let pts = spec.points();
        let mut z_ref = 0.0;
        let mut s_ref = 0.0;
        for &a in &pts {
            for &b in &pts {
                let w = (-energy(&[b, a])).exp();
                z_ref += w;
                s_ref += w * a * b;
            }
        }
        assert!((z - z_ref).abs() < 1e-12 * z_ref);
        assert!((sums[0] - s_ref).abs() < 1e-12 * s_ref.abs().max(1.0));
    }

    #[test]
    fn malformed_specs_are_rejected() {
        assert!(QuadratureSpec::new(7, 3.0).is_err());
        assert!(QuadratureSpec::new(2, 3.0).is_err());
        assert!(QuadratureSpec::new(8, 0.0).is_err());
        assert!(QuadratureSpec::for_potential(-0.1, 0.3, 8).is_err());
        assert!(QuadratureSpec::for_potential(0.0, -0.3, 8).is_err());
        let spec = QuadratureSpec::new(1000, 1.0).unwrap();
        assert!(matches!(
            tensor_accumulate(&spec, 3, 0, 0.0, |_| 0.0, |_, _| ()),
            Err(Phi4Error::TooMuchWork { .. })
        ));
    }
}
