//! Phase portrait of the two-parameter flow on a grid of starts.
//!
//! With a constant coefficient the coupling is confined: any start in
//! [0, 1/a] maps into [0, L^eps/(4a)] and converges toward s*, so the only
//! way to escape is along the mass direction. A start is classified by
//! whether mu leaves the order-one window within the requested number of
//! scales, and in which direction; classification is therefore relative to
//! the observation window, and a shift too small to escape in j_max steps
//! reads as converging.

use crate::flow::{run_flow, BetaSource, FlowParams, FlowTrajectory, Termination};
use crate::{FlowError, Result};

/// |mu| beyond this counts as having left the critical neighborhood.
const MU_ESCAPE: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PortraitClass {
    Converging,
    MuDivergingUp,
    MuDivergingDown,
}

#[derive(Clone, Debug)]
pub struct PortraitPoint {
    pub s0: f64,
    pub mu0: f64,
    pub class: PortraitClass,
    pub trajectory: FlowTrajectory,
}

fn classify(trajectory: &FlowTrajectory) -> PortraitClass {
    let escaped = match trajectory.termination {
        Termination::Diverged { .. } => true,
        _ => trajectory.end().mu.abs() > MU_ESCAPE,
    };
    if !escaped {
        PortraitClass::Converging
    } else if trajectory.end().mu > 0.0 {
        PortraitClass::MuDivergingUp
    } else {
        PortraitClass::MuDivergingDown
    }
}

/// Runs the constant-coefficient flow from every (s0, mu0) grid pair.
/// Starts must lie in [0, 1/a], where the coupling recursion is bounded.
pub fn phase_portrait(
    params: &FlowParams,
    a: f64,
    s0_grid: &[f64],
    mu0_grid: &[f64],
    j_max: usize,
) -> Result<Vec<PortraitPoint>> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(FlowError::NoStableFixedPoint(a));
    }
    let cap = 1.0 / a;
    let source = BetaSource::Constant(a);
    let mut out = Vec::with_capacity(s0_grid.len() * mu0_grid.len());
    for &s0 in s0_grid {
        if !(0.0..=cap).contains(&s0) {
            return Err(FlowError::BadStart { s0, max: cap });
        }
        for &mu0 in mu0_grid {
            let trajectory = run_flow(params, &source, None, s0, mu0, j_max);
            out.push(PortraitPoint {
                s0,
                mu0,
                class: classify(&trajectory),
                trajectory,
            });
        }
    }
    Ok(out)
}
