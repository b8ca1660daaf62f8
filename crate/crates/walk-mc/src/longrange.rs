//! Heavy-tailed single-step sampler driven by the fractional Laplacian.
//!
//! The kernel row of (-lap)^(alpha/2) on a period-P torus has a positive
//! diagonal and nonpositive off-diagonal entries summing to minus the
//! diagonal, so the off-diagonal magnitudes normalised by the diagonal form
//! an exact jump distribution. The sampler truncates it to a box of radius R
//! in the sup norm and refuses to run when the discarded tail mass exceeds
//! the caller's tolerance. Tabulated probabilities decay like |x|^-(d+alpha)
//! well inside the truncation box, which is the diagnostic the tests pin.

use crate::{Result, WalkError};
use lattice_core::{fractional_laplacian_row, TorusLattice};
use rand::Rng;

#[derive(Debug)]
pub struct LongRangeStepper {
    dim: usize,
    alpha: f64,
    radius: usize,
    tail_mass: f64,
    /// Flattened support offsets, `dim` coordinates per entry.
    offsets: Vec<i64>,
    /// Normalised probability of each support entry.
    probs: Vec<f64>,
    /// Cumulative probabilities for inverse-transform sampling.
    cum: Vec<f64>,
}

impl LongRangeStepper {
    pub fn new(
        dim: usize,
        period: usize,
        alpha: f64,
        radius: usize,
        tail_tol: f64,
    ) -> Result<Self> {
        let torus = TorusLattice::new(dim, period, 1)?;
        if radius == 0 || 2 * radius >= period {
            return Err(WalkError::BadGeometry(format!(
                "truncation radius {radius} must satisfy 0 < 2R < period {period}"
            )));
        }
        let row = fractional_laplacian_row(&torus, alpha)?;
        let diagonal = row[0];
        if !(diagonal > 0.0) {
            return Err(WalkError::BadKernel(format!(
                "diagonal {diagonal} not positive"
            )));
        }

        let side = 2 * radius + 1;
        let mut offsets = Vec::new();
        let mut weights = Vec::new();
        let mut coords = vec![-(radius as i64); dim];
        'cells: loop {
            if coords.iter().any(|&c| c != 0) {
                let site = site_of_offset(&torus, &coords);
                let w = -row[site];
                if w < -1e-12 * diagonal {
                    return Err(WalkError::BadKernel(format!(
                        "off-diagonal entry {} at offset {:?} has the wrong sign",
                        row[site], coords
                    )));
                }
                offsets.extend_from_slice(&coords);
                weights.push(w.max(0.0));
            }
            for a in 0..dim {
                coords[a] += 1;
                if coords[a] <= radius as i64 {
                    continue 'cells;
                }
                coords[a] = -(radius as i64);
            }
            break;
        }
        debug_assert_eq!(weights.len(), side.pow(dim as u32) - 1);

        let kept: f64 = weights.iter().sum();
        let tail_mass = (1.0 - kept / diagonal).max(0.0);
        if tail_mass > tail_tol {
            return Err(WalkError::TailMass {
                tail: tail_mass,
                tol: tail_tol,
            });
        }

        let probs: Vec<f64> = weights.iter().map(|w| w / kept).collect();
        let mut cum = Vec::with_capacity(probs.len());
        let mut acc = 0.0;
        for &p in &probs {
            acc += p;
            cum.push(acc);
        }
        if let Some(last) = cum.last_mut() {
            *last = 1.0;
        }

        Ok(Self {
            dim,
            alpha,
            radius,
            tail_mass,
            offsets,
            probs,
            cum,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Probability mass discarded by the truncation.
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn support_size(&self) -> usize {
        self.probs.len()
    }

    pub fn offset(&self, i: usize) -> &[i64] {
        &self.offsets[i * self.dim..(i + 1) * self.dim]
    }

    pub fn probability(&self, i: usize) -> f64 {
        self.probs[i]
    }

    /// Draws one jump; returns the offset coordinates.
    pub fn sample_step<R: Rng + ?Sized>(&self, rng: &mut R) -> &[i64] {
        let u: f64 = rng.random();
        let i = self.cum.partition_point(|&c| c <= u);
        self.offset(i.min(self.probs.len() - 1))
    }
}

fn site_of_offset(torus: &TorusLattice, coords: &[i64]) -> usize {
    let p = torus.period() as i64;
    let mut site = 0usize;
    let mut stride = 1usize;
    for &c in coords {
        site += c.rem_euclid(p) as usize * stride;
        stride *= torus.period();
    }
    site
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nu::linear_fit;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn tabulated_decay_matches_the_stable_exponent() {
        let s = LongRangeStepper::new(1, 512, 1.2, 100, 0.05).unwrap();
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for i in 0..s.support_size() {
            let x = s.offset(i)[0];
            if (2..=40).contains(&x) {
                xs.push((x as f64).ln());
                ys.push(s.probability(i).ln());
            }
        }
        let (slope, _) = linear_fit(&xs, &ys);
        assert!(
            (slope + 2.2).abs() < 0.15,
            "log-log slope {slope} should be near -(d + alpha) = -2.2"
        );
    }

    #[test]
    fn sampling_frequencies_track_probabilities() {
        let s = LongRangeStepper::new(1, 256, 1.2, 60, 0.05).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let draws = 200_000usize;
        let mut counts = vec![0usize; s.support_size()];
        for _ in 0..draws {
            let step = s.sample_step(&mut rng)[0];
            let i = (0..s.support_size())
                .find(|&i| s.offset(i)[0] == step)
                .unwrap();
            counts[i] += 1;
        }
        let mut order: Vec<usize> = (0..s.support_size()).collect();
        order.sort_by(|&a, &b| s.probability(b).total_cmp(&s.probability(a)));
        for &i in order.iter().take(5) {
            let freq = counts[i] as f64 / draws as f64;
            let rel = (freq - s.probability(i)).abs() / s.probability(i);
            assert!(rel < 0.05, "offset {:?}: rel err {rel}", s.offset(i));
        }
    }

    #[test]
    fn probabilities_are_symmetric_and_normalised() {
        let s = LongRangeStepper::new(2, 64, 1.5, 10, 0.1).unwrap();
        assert_eq!(s.support_size(), 21 * 21 - 1);
        let total: f64 = (0..s.support_size()).map(|i| s.probability(i)).sum();
        assert!((total - 1.0).abs() < 1e-12);
        for i in 0..s.support_size() {
            let off = s.offset(i).to_vec();
            let neg: Vec<i64> = off.iter().map(|&c| -c).collect();
            let j = (0..s.support_size()).find(|&j| s.offset(j) == &neg[..]).unwrap();
            assert!((s.probability(i) - s.probability(j)).abs() < 1e-12);
        }
    }

    #[test]
    fn unacceptable_tail_mass_is_an_error() {
        let err = LongRangeStepper::new(1, 512, 0.4, 3, 0.01).unwrap_err();
        match err {
            WalkError::TailMass { tail, tol } => {
                assert!(tail > tol);
                assert_eq!(tol, 0.01);
            }
            other => panic!("expected tail-mass error, got {other}"),
        }
    }

    #[test]
    fn radius_must_fit_inside_the_torus() {
        assert!(matches!(
            LongRangeStepper::new(1, 64, 1.0, 32, 0.5),
            Err(WalkError::BadGeometry(_))
        ));
        assert!(matches!(
            LongRangeStepper::new(1, 64, 1.0, 0, 0.5),
            Err(WalkError::BadGeometry(_))
        ));
    }
}
