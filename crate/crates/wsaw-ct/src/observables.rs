//! Monte Carlo estimators for c(T, g) and the susceptibility.
//!
//! Sample paths are independent, one generator stream per path, reduced in
//! path order so results are bit-stable for a fixed seed. The susceptibility
//! integrates each path's weight profile exp(-g I(t) - nu t) over a fixed
//! grid by the trapezoid rule; I(t) is advanced interval by interval using
//! d/dt I = 2 l_x(t) while the walk holds at x, so one path yields its whole
//! profile in a single sweep.

use crate::localtime::self_intersection_local_time;
use crate::walk::{simulate_ct_walk, CtGenerator, Site};
use crate::{Result, WsawError};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::HashMap;

#[derive(Clone, Copy, Debug)]
pub struct WsawEstimate {
    pub g: f64,
    pub horizon: f64,
    pub samples: usize,
    pub mean: f64,
    pub stderr: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct ChiEstimate {
    pub g: f64,
    pub nu: f64,
    /// Trapezoid estimate of the integral over [0, horizon].
    pub chi: f64,
    pub stderr: f64,
    /// Bound on the discarded tail, exp(-nu horizon) / nu; valid since c <= 1.
    pub tail_bound: f64,
    pub horizon: f64,
    pub grid_step: f64,
    pub samples: usize,
}

fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Estimates c(T, g) = E[exp(-g I(T))] over independent sample paths.
pub fn estimate_c(
    generator: &CtGenerator,
    g: f64,
    horizon: f64,
    n_samples: usize,
    seed: u64,
) -> Result<WsawEstimate> {
    if !(g >= 0.0) {
        return Err(WsawError::BadCoupling(g));
    }
    if !(horizon > 0.0) {
        return Err(WsawError::BadHorizon(horizon));
    }
    if n_samples == 0 {
        return Err(WsawError::NoSamples);
    }
    let values: Vec<f64> = (0..n_samples)
        .into_par_iter()
        .map(|p| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(p as u64);
            let w = simulate_ct_walk(generator, horizon, &mut rng).expect("validated horizon");
            (-g * self_intersection_local_time(&w)).exp()
        })
        .collect();
    let (mean, stderr) = mean_and_stderr(&values);
    Ok(WsawEstimate {
        g,
        horizon,
        samples: n_samples,
        mean,
        stderr,
    })
}

/// Evaluates exp(-g I(t) - nu t) at the grid times, which must be sorted
/// within [0, horizon]. I(t) is continuous, so grid points on jump times may
/// be handled by either adjacent interval.
fn weight_profile(
    w: &crate::walk::CtWalkTrajectory,
    g: f64,
    nu: f64,
    ts: &[f64],
) -> Vec<f64> {
    let mut lt: HashMap<Site, f64> = HashMap::with_capacity(w.sites.len());
    let mut i_val = 0.0;
    let mut ys = Vec::with_capacity(ts.len());
    let mut k = 0;
    for (start, end, site) in w.intervals() {
        let entry = lt.entry(site).or_insert(0.0);
        let a = *entry;
        while k < ts.len() && ts[k] <= end + 1e-15 {
            let dt = (ts[k] - start).max(0.0);
            let i_here = i_val + 2.0 * a * dt + dt * dt;
            ys.push((-g * i_here - nu * ts[k]).exp());
            k += 1;
        }
        let span = end - start;
        *entry = a + span;
        i_val += 2.0 * a * span + span * span;
    }
    debug_assert_eq!(ys.len(), ts.len());
    ys
}

fn trapezoid(ts: &[f64], ys: &[f64]) -> f64 {
    ts.windows(2)
        .zip(ys.windows(2))
        .map(|(t, y)| (t[1] - t[0]) * (y[0] + y[1]) / 2.0)
        .sum()
}

/// Estimates chi(g, nu) by integrating the Monte Carlo weight profile over
/// [0, t_max] and reporting the truncation tail bound separately.
pub fn estimate_chi(
    generator: &CtGenerator,
    g: f64,
    nu: f64,
    t_max: f64,
    grid_step: f64,
    n_samples: usize,
    seed: u64,
) -> Result<ChiEstimate> {
    if !(nu > 0.0) {
        return Err(WsawError::UnsupportedRegime(nu));
    }
    if !(g >= 0.0) {
        return Err(WsawError::BadCoupling(g));
    }
    if !(t_max > 0.0) {
        return Err(WsawError::BadHorizon(t_max));
    }
    if !(grid_step > 0.0) || grid_step > t_max {
        return Err(WsawError::BadGrid);
    }
    if n_samples == 0 {
        return Err(WsawError::NoSamples);
    }
    let mut ts: Vec<f64> = Vec::new();
    let mut t = 0.0;
    while t < t_max {
        ts.push(t);
        t += grid_step;
    }
    ts.push(t_max);

    let integrals: Vec<f64> = (0..n_samples)
        .into_par_iter()
        .map(|p| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(p as u64);
            let w = simulate_ct_walk(generator, t_max, &mut rng).expect("validated horizon");
            let ys = weight_profile(&w, g, nu, &ts);
            trapezoid(&ts, &ys)
        })
        .collect();
    let (chi, stderr) = mean_and_stderr(&integrals);
    Ok(ChiEstimate {
        g,
        nu,
        chi,
        stderr,
        tail_bound: (-nu * t_max).exp() / nu,
        horizon: t_max,
        grid_step,
        samples: n_samples,
    })
}
