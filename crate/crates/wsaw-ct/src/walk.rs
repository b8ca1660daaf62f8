//! Trajectory sampling for continuous-time walks.
//!
//! Three generator modes share one sampler: nearest-neighbour on Z^d
//! (total rate 2d, uniform neighbour), tabulated long-range jumps on Z^d
//! (rates proportional to a caller-supplied kernel row), and an arbitrary
//! finite-graph generator with nonnegative off-diagonal rates and zero row
//! sums. Holding times are exponential with the state's total exit rate.

use crate::graphs::GraphGenerator;
use crate::{Result, WsawError};
use rand::Rng;

pub const MAX_DIM: usize = 5;

/// Lattice site, or a graph node stored in the first coordinate.
pub type Site = [i64; MAX_DIM];

pub enum CtGenerator {
    NearestNeighbor {
        dim: usize,
    },
    LongRange {
        dim: usize,
        /// Flattened jump offsets, `dim` coordinates per entry.
        offsets: Vec<i64>,
        rates: Vec<f64>,
        cum: Vec<f64>,
        total_rate: f64,
    },
    Graph(GraphGenerator),
}

impl CtGenerator {
    pub fn nearest_neighbor(dim: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(WsawError::BadGenerator(format!(
                "dimension {dim} outside 1..={MAX_DIM}"
            )));
        }
        Ok(Self::NearestNeighbor { dim })
    }

    /// Jump process on Z^d with the given offset rates (all nonnegative,
    /// at least one positive, offsets nonzero).
    pub fn long_range(dim: usize, offsets: &[Vec<i64>], rates: &[f64]) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(WsawError::BadGenerator(format!(
                "dimension {dim} outside 1..={MAX_DIM}"
            )));
        }
        if offsets.len() != rates.len() || offsets.is_empty() {
            return Err(WsawError::BadGenerator(
                "offsets and rates must be nonempty and of equal length".into(),
            ));
        }
        let mut flat = Vec::with_capacity(dim * offsets.len());
        for off in offsets {
            if off.len() != dim || off.iter().all(|&c| c == 0) {
                return Err(WsawError::BadGenerator(format!(
                    "offset {off:?} must have {dim} coordinates and be nonzero"
                )));
            }
            flat.extend_from_slice(off);
        }
        let mut cum = Vec::with_capacity(rates.len());
        let mut total = 0.0;
        for &r in rates {
            if !(r >= 0.0) {
                return Err(WsawError::BadGenerator(format!("negative rate {r}")));
            }
            total += r;
            cum.push(total);
        }
        if !(total > 0.0) {
            return Err(WsawError::BadGenerator("total jump rate is zero".into()));
        }
        Ok(Self::LongRange {
            dim,
            offsets: flat,
            rates: rates.to_vec(),
            cum,
            total_rate: total,
        })
    }

    pub fn graph(q: &[Vec<f64>]) -> Result<Self> {
        Ok(Self::Graph(GraphGenerator::new(q)?))
    }

    /// Total exit rate out of `site`.
    pub fn exit_rate(&self, site: &Site) -> f64 {
        match self {
            Self::NearestNeighbor { dim } => 2.0 * *dim as f64,
            Self::LongRange { total_rate, .. } => *total_rate,
            Self::Graph(g) => g.exit_rate(site[0] as usize),
        }
    }

    fn jump<R: Rng + ?Sized>(&self, site: &Site, rng: &mut R) -> Site {
        let mut next = *site;
        match self {
            Self::NearestNeighbor { dim } => {
                let m = rng.random_range(0..2 * dim);
                let axis = m / 2;
                next[axis] += if m % 2 == 0 { 1 } else { -1 };
            }
            Self::LongRange {
                dim,
                offsets,
                rates,
                cum,
                total_rate,
            } => {
                let u: f64 = rng.random::<f64>() * total_rate;
                let i = cum.partition_point(|&c| c <= u).min(rates.len() - 1);
                for a in 0..*dim {
                    next[a] += offsets[i * dim + a];
                }
            }
            Self::Graph(g) => {
                next[0] = g.jump(site[0] as usize, rng) as i64;
            }
        }
        next
    }
}

#[derive(Clone, Debug)]
pub struct CtWalkTrajectory {
    pub horizon: f64,
    /// Strictly increasing jump times in (0, horizon).
    pub jump_times: Vec<f64>,
    /// Sites visited; sites[0] is the start, one more entry per jump.
    pub sites: Vec<Site>,
}

impl CtWalkTrajectory {
    /// Occupation intervals (start, end, site); ends meet starts exactly.
    pub fn intervals(&self) -> impl Iterator<Item = (f64, f64, Site)> + '_ {
        let n = self.jump_times.len();
        (0..=n).map(move |i| {
            let start = if i == 0 { 0.0 } else { self.jump_times[i - 1] };
            let end = if i == n { self.horizon } else { self.jump_times[i] };
            (start, end, self.sites[i])
        })
    }

    pub fn jumps(&self) -> usize {
        self.jump_times.len()
    }
}

pub fn simulate_ct_walk<R: Rng + ?Sized>(
    generator: &CtGenerator,
    horizon: f64,
    rng: &mut R,
) -> Result<CtWalkTrajectory> {
    if !(horizon > 0.0) {
        return Err(WsawError::BadHorizon(horizon));
    }
    let mut site: Site = [0; MAX_DIM];
    let mut t = 0.0;
    let mut jump_times = Vec::new();
    let mut sites = vec![site];
    loop {
        let rate = generator.exit_rate(&site);
        if !(rate > 0.0) {
            break;
        }
        let u: f64 = rng.random();
        t += -(1.0 - u).ln() / rate;
        if t >= horizon {
            break;
        }
        site = generator.jump(&site, rng);
        jump_times.push(t);
        sites.push(site);
    }
    Ok(CtWalkTrajectory {
        horizon,
        jump_times,
        sites,
    })
}
