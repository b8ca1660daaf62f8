//! The flow stepper: parameters, coefficient sources, and trajectories.

use crate::{FlowError, Result};

/// Trajectories whose variables grow past this are abandoned as diverged.
pub const OVERFLOW_GUARD: f64 = 1e8;

#[derive(Clone, Copy, Debug)]
pub struct FlowParams {
    pub l: usize,
    pub eps: f64,
    pub alpha: f64,
    pub n_components: f64,
}

impl FlowParams {
    pub fn new(l: usize, eps: f64, alpha: f64, n_components: f64) -> Result<Self> {
        if l < 2 {
            return Err(FlowError::BadBase(l));
        }
        if !(eps >= 0.0) || !eps.is_finite() {
            return Err(FlowError::BadEpsilon(eps));
        }
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(FlowError::BadAlpha(alpha));
        }
        if !(n_components >= 0.0) || !n_components.is_finite() {
            return Err(FlowError::BadComponents(n_components));
        }
        Ok(FlowParams {
            l,
            eps,
            alpha,
            n_components,
        })
    }

    pub(crate) fn l_eps(&self) -> f64 {
        (self.l as f64).powf(self.eps)
    }

    pub(crate) fn l_alpha(&self) -> f64 {
        (self.l as f64).powf(self.alpha)
    }

    /// The mass-shift vertex weight c = (n + 2)/(n + 8).
    pub(crate) fn c(&self) -> f64 {
        (self.n_components + 2.0) / (self.n_components + 8.0)
    }
}

/// Where the per-step coefficient comes from. A table holds the value for
/// step j at index j; steps beyond the table see zero, as if every
/// remaining fluctuation scale were already exhausted.
#[derive(Clone, Debug)]
pub enum BetaSource {
    Constant(f64),
    Table(Vec<f64>),
}

impl BetaSource {
    pub fn at(&self, j: usize) -> f64 {
        match self {
            BetaSource::Constant(a) => *a,
            BetaSource::Table(t) => t.get(j).copied().unwrap_or(0.0),
        }
    }
}

/// Smallest j with L^(alpha j) m^2 >= 1: the scale at which the rescaled
/// mass becomes order one and fluctuations stop mattering.
pub fn mass_scale(m2: f64, alpha: f64, l: usize) -> Result<usize> {
    if !(m2 > 0.0) || !m2.is_finite() {
        return Err(FlowError::BadMass(m2));
    }
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(FlowError::BadAlpha(alpha));
    }
    if l < 2 {
        return Err(FlowError::BadBase(l));
    }
    let raw = -m2.ln() / (alpha * (l as f64).ln());
    if raw <= 0.0 {
        return Ok(0);
    }
    // Snap to the nearest integer before ceiling so that masses sitting
    // exactly on a scale boundary do not get pushed one scale up by the
    // last ulp of the logarithm.
    let nearest = raw.round();
    let j = if (raw - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest
    } else {
        raw.ceil()
    };
    Ok(j as usize)
}

/// One point of a trajectory. `dmu_dmu0` carries the sensitivity of mu to
/// the initial mass shift; because the s recursion never reads mu, the s
/// component of that sensitivity is identically zero and is not stored.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlowState {
    pub j: usize,
    pub s: f64,
    pub mu: f64,
    pub dmu_dmu0: f64,
}

impl FlowState {
    pub fn start(s0: f64, mu0: f64) -> Self {
        FlowState {
            j: 0,
            s: s0,
            mu: mu0,
            dmu_dmu0: 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    /// Ran every requested step with live coefficients throughout.
    Completed,
    /// Ran every requested step, with the coefficient frozen to zero from
    /// the given scale on.
    PastMassScale { frozen_from: usize },
    /// A variable left [-OVERFLOW_GUARD, OVERFLOW_GUARD] at this step; the
    /// offending state is the last one recorded.
    Diverged { at: usize },
}

#[derive(Clone, Debug)]
pub struct FlowTrajectory {
    pub states: Vec<FlowState>,
    pub termination: Termination,
}

impl FlowTrajectory {
    pub fn end(&self) -> &FlowState {
        self.states.last().expect("trajectory has a start state")
    }
}

/// Advances one scale. The multiplier L^alpha (1 - c beta s) that scales
/// mu also propagates dmu/dmu0, which is the whole Jacobian entry thanks
/// to the triangular structure.
pub fn step_flow(params: &FlowParams, state: &FlowState, beta: f64) -> FlowState {
    let damp = 1.0 - params.c() * beta * state.s;
    let mu_mult = params.l_alpha() * damp;
    FlowState {
        j: state.j + 1,
        s: params.l_eps() * state.s * (1.0 - beta * state.s),
        mu: mu_mult * state.mu,
        dmu_dmu0: mu_mult * state.dmu_dmu0,
    }
}

/// Runs `j_max` steps from (s0, mu0), zeroing the coefficient from
/// `mass_scale` on when one is given.
pub fn run_flow(
    params: &FlowParams,
    source: &BetaSource,
    mass_scale: Option<usize>,
    s0: f64,
    mu0: f64,
    j_max: usize,
) -> FlowTrajectory {
    let mut states = Vec::with_capacity(j_max + 1);
    let mut state = FlowState::start(s0, mu0);
    states.push(state);
    let mut froze = false;
    for j in 0..j_max {
        let frozen = mass_scale.is_some_and(|jm| j >= jm);
        froze |= frozen;
        let beta = if frozen { 0.0 } else { source.at(j) };
        state = step_flow(params, &state, beta);
        states.push(state);
        if !state.s.is_finite()
            || !state.mu.is_finite()
            || state.s.abs() > OVERFLOW_GUARD
            || state.mu.abs() > OVERFLOW_GUARD
        {
            return FlowTrajectory {
                states,
                termination: Termination::Diverged { at: state.j },
            };
        }
    }
    let termination = if froze {
        Termination::PastMassScale {
            frozen_from: mass_scale.expect("froze implies a mass scale"),
        }
    } else {
        Termination::Completed
    };
    FlowTrajectory {
        states,
        termination,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> FlowParams {
        FlowParams::new(2, 0.1, 0.55, 1.0).unwrap()
    }

    #[test]
    fn mass_scale_matches_hand_values() {
        assert_eq!(mass_scale(1.0, 0.55, 2).unwrap(), 0);
        assert_eq!(mass_scale(7.3, 0.55, 2).unwrap(), 0);
        assert_eq!(mass_scale(0.125, 1.0, 2).unwrap(), 3);
        // ceil(10 ln 10 / (0.55 ln 2)) = ceil(60.399...) = 61.
        assert_eq!(mass_scale(1e-10, 0.55, 2).unwrap(), 61);
        assert!(mass_scale(0.0, 0.55, 2).is_err());
        assert!(mass_scale(1e-4, 0.55, 1).is_err());
    }

    #[test]
    fn mass_scale_is_the_smallest_scale_that_tames_the_mass() {
        let (alpha, l) = (0.55, 2usize);
        let lal = (l as f64).powf(alpha);
        let mut prev = 0;
        for k in 0..40 {
            let m2 = 0.9 * (0.62f64).powi(k);
            let jm = mass_scale(m2, alpha, l).unwrap();
            assert!(lal.powi(jm as i32) * m2 >= 1.0 - 1e-9, "j_m too small at {m2}");
            if jm > 0 {
                assert!(
                    lal.powi(jm as i32 - 1) * m2 < 1.0 + 1e-9,
                    "j_m - 1 already suffices at {m2}"
                );
            }
            assert!(jm >= prev, "mass scale must grow as the mass shrinks");
            prev = jm;
        }
    }

    #[test]
    fn gaussian_line_is_preserved_exactly() {
        let p = params();
        let state = FlowState::start(0.0, 0.37);
        let next = step_flow(&p, &state, 2.1);
        assert_eq!(next.s, 0.0);
        assert_eq!(next.mu, p.l_alpha() * 0.37);
        assert_eq!(next.dmu_dmu0, p.l_alpha());
    }

    #[test]
    fn nontrivial_fixed_point_is_stationary() {
        let p = params();
        let a = 1.0;
        let s_star = (1.0 - (2.0f64).powf(-0.1)) / a;
        let next = step_flow(&p, &FlowState::start(s_star, 0.0), a);
        assert!((next.s - s_star).abs() <= 1e-14, "drift {}", next.s - s_star);
    }

    #[test]
    fn coupling_never_reads_the_mass_shift() {
        let p = params();
        let source = BetaSource::Constant(2.1);
        let a = run_flow(&p, &source, None, 0.03, 0.3, 40);
        let b = run_flow(&p, &source, None, 0.03, -1.7, 40);
        assert_eq!(a.states.len(), b.states.len());
        for (x, y) in a.states.iter().zip(&b.states) {
            assert_eq!(x.s.to_bits(), y.s.to_bits());
        }
    }

    #[test]
    fn sensitivity_matches_central_differences() {
        let p = params();
        let source = BetaSource::Table((0..25).map(|j| 2.0 + 0.1 * (j as f64).sin()).collect());
        let h = 1e-4;
        let mu0 = 0.02;
        let up = run_flow(&p, &source, Some(20), 0.04, mu0 + h, 25);
        let down = run_flow(&p, &source, Some(20), 0.04, mu0 - h, 25);
        let mid = run_flow(&p, &source, Some(20), 0.04, mu0, 25);
        let fd = (up.end().mu - down.end().mu) / (2.0 * h);
        let got = mid.end().dmu_dmu0;
        assert!(
            (fd - got).abs() <= 1e-6 * got.abs(),
            "fd {fd} vs propagated {got}"
        );
    }

    #[test]
    fn runaway_mass_shift_trips_the_guard() {
        let p = params();
        let t = run_flow(&p, &BetaSource::Constant(1.0), None, 0.0, 1e7, 100);
        match t.termination {
            Termination::Diverged { at } => {
                assert!(at <= 10, "guard should trip within a few steps, took {at}");
                assert_eq!(t.states.len(), at + 1);
            }
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn coefficients_freeze_past_the_mass_scale() {
        let p = params();
        let t = run_flow(&p, &BetaSource::Constant(1.5), Some(3), 0.05, 0.01, 8);
        assert_eq!(
            t.termination,
            Termination::PastMassScale { frozen_from: 3 }
        );
        for w in t.states.windows(2).skip(3) {
            assert_eq!(w[1].s, p.l_eps() * w[0].s);
            assert_eq!(w[1].mu, p.l_alpha() * w[0].mu);
        }
    }

    #[test]
    fn table_source_reads_zero_off_the_end() {
        let source = BetaSource::Table(vec![1.0, 2.0]);
        assert_eq!(source.at(0), 1.0);
        assert_eq!(source.at(1), 2.0);
        assert_eq!(source.at(2), 0.0);
        assert_eq!(BetaSource::Constant(0.7).at(99), 0.7);
    }

    #[test]
    fn bad_parameters_are_rejected() {
        assert!(FlowParams::new(1, 0.1, 0.55, 1.0).is_err());
        assert!(FlowParams::new(2, -0.1, 0.55, 1.0).is_err());
        assert!(FlowParams::new(2, 0.1, 0.0, 1.0).is_err());
        assert!(FlowParams::new(2, 0.1, 0.55, -1.0).is_err());
    }
}
