//! Per-site occupation times and the self-intersection local time.
//!
//! The double integral of 1{X(s) = X(t)} over [0, T]^2 splits over the site
//! both times land on, so I(T) = sum_x l_x(T)^2 exactly; the quadratic-cost
//! double integral over jump intervals survives only as a test oracle.

use crate::walk::{CtWalkTrajectory, Site};
use std::collections::BTreeMap;

/// Occupation time per visited site; values sum to the horizon.
/// Ordered so that downstream float reductions are reproducible.
pub fn local_times(w: &CtWalkTrajectory) -> BTreeMap<Site, f64> {
    let mut times = BTreeMap::new();
    for (start, end, site) in w.intervals() {
        *times.entry(site).or_insert(0.0) += end - start;
    }
    times
}

/// I(T) = sum over sites of the squared occupation time.
pub fn self_intersection_local_time(w: &CtWalkTrajectory) -> f64 {
    local_times(w).values().map(|l| l * l).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::{simulate_ct_walk, CtGenerator, MAX_DIM};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// O(jumps^2) evaluation of the double integral over jump intervals.
    fn double_integral(w: &CtWalkTrajectory) -> f64 {
        let intervals: Vec<_> = w.intervals().collect();
        let mut total = 0.0;
        for &(s0, s1, site_a) in &intervals {
            for &(t0, t1, site_b) in &intervals {
                if site_a == site_b {
                    total += (s1 - s0) * (t1 - t0);
                }
            }
        }
        total
    }

    #[test]
    fn zero_jump_path_has_i_equal_t_squared() {
        let w = CtWalkTrajectory {
            horizon: 1.7,
            jump_times: vec![],
            sites: vec![[0; MAX_DIM]],
        };
        assert_eq!(self_intersection_local_time(&w), 1.7 * 1.7);
        assert_eq!(local_times(&w)[&[0; MAX_DIM]], 1.7);
    }

    #[test]
    fn equal_time_distinct_sites_give_t_squared_over_k() {
        let k = 5;
        let horizon = 2.0;
        let dt = horizon / k as f64;
        let mut sites = Vec::new();
        for i in 0..k {
            let mut s = [0i64; MAX_DIM];
            s[0] = i as i64;
            sites.push(s);
        }
        let w = CtWalkTrajectory {
            horizon,
            jump_times: (1..k).map(|i| i as f64 * dt).collect(),
            sites,
        };
        let i_t = self_intersection_local_time(&w);
        assert!((i_t - horizon * horizon / k as f64).abs() < 1e-12);
    }

    #[test]
    fn sum_of_squares_matches_the_double_integral_and_bounds() {
        let generator = CtGenerator::nearest_neighbor(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let w = simulate_ct_walk(&generator, 3.0, &mut rng).unwrap();
            let fast = self_intersection_local_time(&w);
            let slow = double_integral(&w);
            assert!(
                (fast - slow).abs() <= 1e-10 * slow.max(1.0),
                "identity broke: {fast} vs {slow}"
            );
            let total: f64 = local_times(&w).values().sum();
            assert!((total - w.horizon).abs() < 1e-12);
            assert!(fast <= w.horizon * w.horizon + 1e-12);
        }
    }

    proptest! {
        /// Synthetic trajectories with arbitrary timings and site labels
        /// (not necessarily walk-reachable) satisfy the same identities.
        #[test]
        fn identities_hold_for_arbitrary_interval_structures(
            raw_holds in proptest::collection::vec(1e-3..1.0f64, 1..24),
            labels in proptest::collection::vec(0i64..6, 1..24),
        ) {
            let n = raw_holds.len().min(labels.len());
            let mut jump_times = Vec::new();
            let mut t = 0.0;
            for h in &raw_holds[..n - 1] {
                t += h;
                jump_times.push(t);
            }
            let horizon = t + raw_holds[n - 1];
            let sites: Vec<_> = labels[..n]
                .iter()
                .map(|&l| {
                    let mut s = [0i64; MAX_DIM];
                    s[0] = l;
                    s
                })
                .collect();
            let w = CtWalkTrajectory { horizon, jump_times, sites };

            let total: f64 = local_times(&w).values().sum();
            prop_assert!((total - horizon).abs() < 1e-12 * horizon.max(1.0));
            let fast = self_intersection_local_time(&w);
            let slow = double_integral(&w);
            prop_assert!((fast - slow).abs() <= 1e-10 * slow.max(1.0));
            prop_assert!(fast <= horizon * horizon * (1.0 + 1e-12));
        }
    }
}
