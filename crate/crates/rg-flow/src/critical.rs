//! Fixed points of the coupling recursion and the critical mass shift.
//!
//! With a constant coefficient a the coupling map s -> L^eps s (1 - a s)
//! has the Gaussian root s = 0, expanding with multiplier L^eps, and the
//! root s* = (1 - L^-eps)/a, whose multiplier L^eps (1 - 2 a s*) collapses
//! to 2 - L^eps and sits inside the unit interval for small eps. The mass
//! shift is the expanding direction through either root, so criticality is
//! a shooting problem: the end value mu_{j_max} is strictly increasing in
//! mu0, and bisection pins the initial shift that keeps the trajectory
//! balanced between the two mass phases.

use crate::flow::{run_flow, BetaSource, FlowParams};
use crate::{FlowError, Result};

#[derive(Clone, Copy, Debug)]
pub struct FixedPoints {
    /// The free root s = 0 and its multiplier L^eps.
    pub s_gaussian: f64,
    pub multiplier_gaussian: f64,
    /// The interacting root (1 - L^-eps)/a and its multiplier
    /// L^eps (1 - 2 a s*); the roots merge when eps = 0.
    pub s_star: f64,
    pub multiplier_star: f64,
}

pub fn find_fixed_points(params: &FlowParams, a: f64) -> Result<FixedPoints> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(FlowError::NoStableFixedPoint(a));
    }
    let lf = params.l as f64;
    let l_eps = lf.powf(params.eps);
    let s_star = (1.0 - lf.powf(-params.eps)) / a;
    Ok(FixedPoints {
        s_gaussian: 0.0,
        multiplier_gaussian: l_eps,
        s_star,
        multiplier_star: l_eps * (1.0 - 2.0 * a * s_star),
    })
}

#[derive(Clone, Copy, Debug)]
pub struct CriticalShot {
    pub mu0_c: f64,
    /// End value of mu on the final bisection trajectory.
    pub mu_end: f64,
    pub iterations: usize,
}

/// End value of mu, read at divergence if the trajectory blows up early;
/// its sign is what bisection steers on.
fn shot_end(
    params: &FlowParams,
    source: &BetaSource,
    mass_scale: Option<usize>,
    s0: f64,
    mu0: f64,
    j_max: usize,
) -> f64 {
    run_flow(params, source, mass_scale, s0, mu0, j_max).end().mu
}

/// Bisects on mu0 between a start driven to the massive phase (mu -> +inf)
/// and one driven the other way, shrinking the bracket until it is below
/// `tol` in absolute width (relative for large roots).
pub fn shoot_critical_mu0(
    params: &FlowParams,
    source: &BetaSource,
    mass_scale: Option<usize>,
    s0: f64,
    j_max: usize,
    tol: f64,
) -> Result<CriticalShot> {
    let mut lo = -1.0f64;
    let mut hi = 1.0f64;
    for _ in 0..60 {
        if shot_end(params, source, mass_scale, s0, lo, j_max) < 0.0 {
            break;
        }
        lo *= 2.0;
    }
    for _ in 0..60 {
        if shot_end(params, source, mass_scale, s0, hi, j_max) > 0.0 {
            break;
        }
        hi *= 2.0;
    }
    if !(shot_end(params, source, mass_scale, s0, lo, j_max) < 0.0
        && shot_end(params, source, mass_scale, s0, hi, j_max) > 0.0)
    {
        return Err(FlowError::BracketingFailure { lo, hi });
    }

    let mut iterations = 0;
    while hi - lo > tol * hi.abs().max(lo.abs()).max(1.0) && iterations < 200 {
        let mid = 0.5 * (lo + hi);
        if shot_end(params, source, mass_scale, s0, mid, j_max) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
    }
    let mu0_c = 0.5 * (lo + hi);
    Ok(CriticalShot {
        mu0_c,
        mu_end: shot_end(params, source, mass_scale, s0, mu0_c, j_max),
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(eps: f64) -> FlowParams {
        FlowParams::new(2, eps, 0.55, 1.0).unwrap()
    }

    #[test]
    fn fixed_points_match_the_closed_forms() {
        let fp = find_fixed_points(&params(0.1), 1.0).unwrap();
        assert_eq!(fp.s_gaussian, 0.0);
        assert_eq!(fp.multiplier_gaussian, (2.0f64).powf(0.1));
        assert!((fp.s_star - 0.066967).abs() < 1e-6);
        // L^eps (1 - 2 a s*) simplifies to 2 - L^eps.
        let closed = 2.0 - (2.0f64).powf(0.1);
        assert!((fp.multiplier_star - closed).abs() < 1e-12);
        assert!((fp.multiplier_star - 0.928227).abs() < 1e-6);
    }

    #[test]
    fn interacting_root_attracts_and_the_free_root_repels() {
        for eps in [0.02, 0.05, 0.1, 0.2] {
            let fp = find_fixed_points(&params(eps), 2.13).unwrap();
            assert!(fp.multiplier_gaussian > 1.0);
            assert!(fp.multiplier_star.abs() < 1.0, "eps = {eps}");
        }
    }

    #[test]
    fn roots_merge_when_eps_vanishes() {
        let fp = find_fixed_points(&params(0.0), 1.7).unwrap();
        assert_eq!(fp.s_star, 0.0);
        assert_eq!(fp.multiplier_star, 1.0);
        assert_eq!(fp.multiplier_gaussian, 1.0);
    }

    #[test]
    fn nonpositive_limit_coefficient_is_rejected() {
        assert!(find_fixed_points(&params(0.1), 0.0).is_err());
        assert!(find_fixed_points(&params(0.1), -2.0).is_err());
    }

    #[test]
    fn free_flow_is_critical_at_zero_shift() {
        let p = params(0.1);
        let shot =
            shoot_critical_mu0(&p, &BetaSource::Constant(0.0), None, 0.0, 30, 1e-12).unwrap();
        assert!(shot.mu0_c.abs() <= 1e-10, "mu0_c = {}", shot.mu0_c);
    }

    #[test]
    fn constant_coupling_at_its_fixed_point_is_critical_at_zero_shift() {
        let p = params(0.1);
        let a = 2.0;
        let s_star = find_fixed_points(&p, a).unwrap().s_star;
        let shot =
            shoot_critical_mu0(&p, &BetaSource::Constant(a), None, s_star, 30, 1e-12).unwrap();
        assert!(shot.mu0_c.abs() <= 1e-10, "mu0_c = {}", shot.mu0_c);
        assert!(shot.mu_end.abs() < 1e-4);
    }

    #[test]
    fn end_value_is_monotone_in_the_initial_shift() {
        let p = params(0.1);
        let source = BetaSource::Constant(2.1);
        let mut prev = f64::NEG_INFINITY;
        for k in -2..=2 {
            let mu0 = 0.1 * k as f64;
            let end = shot_end(&p, &source, Some(12), 0.03, mu0, 16);
            assert!(end > prev, "end value dipped at mu0 = {mu0}");
            prev = end;
        }
    }

    #[test]
    fn table_sourced_shot_is_stable_under_extra_scales() {
        use lattice_core::TorusLattice;

        let torus = TorusLattice::new(1, 2, 10).unwrap();
        let table = gaussian_field::beta_table(&torus, 0.55, 1e-4, 2, 8, 1.0, 0.1).unwrap();
        let p = params(0.1);
        let source = BetaSource::Table(table.beta.clone());
        let s0 = find_fixed_points(&p, table.tail_average).unwrap().s_star;
        let jm = crate::flow::mass_scale(1e-4, 0.55, 2).unwrap();
        let short = shoot_critical_mu0(&p, &source, Some(jm), s0, 8, 1e-12).unwrap();
        let long = shoot_critical_mu0(&p, &source, Some(jm), s0, 10, 1e-12).unwrap();
        assert!(short.mu0_c.is_finite() && long.mu0_c.is_finite());
        assert!(
            (short.mu0_c - long.mu0_c).abs() <= 1e-6,
            "critical shift moved: {} vs {}",
            short.mu0_c,
            long.mu0_c
        );
    }
}
