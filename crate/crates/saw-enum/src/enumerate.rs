//! Depth-first backtracking enumeration with an occupancy bitmap.
//!
//! Counts are produced one length at a time so that a budget overrun still
//! leaves a clean prefix of exact values. For each length the walk's first
//! step is pinned to the positive first axis and the total multiplied by
//! `2d`; the subtrees hanging off the (at most `2d - 1`) second steps are
//! enumerated in parallel, each worker owning its own bitmap.

use crate::{EnumError, Result};
use num_bigint::BigUint;
use rayon::prelude::*;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

/// Exact per-length counts with timing; `complete` is false when a budget
/// stopped the run early, in which case `counts` holds the high-water prefix.
#[derive(Debug, Clone)]
pub struct EnumerationResult {
    pub dim: usize,
    pub requested_max: usize,
    pub counts: Vec<BigUint>,
    pub seconds: Vec<f64>,
    pub complete: bool,
}

impl EnumerationResult {
    /// Number of completed lengths (the high-water mark).
    pub fn completed_max(&self) -> usize {
        self.counts.len()
    }

    pub fn count(&self, n: usize) -> Option<&BigUint> {
        self.counts.get(n.checked_sub(1)?)
    }
}

const MAX_BOX_CELLS: usize = 1 << 28;

struct BoxGeometry {
    cells: usize,
    origin: usize,
    moves: Vec<isize>,
}

impl BoxGeometry {
    fn new(dim: usize, n: usize) -> Result<Self> {
        let side = 2 * n + 1;
        let mut cells = 1usize;
        let mut strides = Vec::with_capacity(dim);
        for _ in 0..dim {
            strides.push(cells as isize);
            cells = cells
                .checked_mul(side)
                .filter(|&c| c <= MAX_BOX_CELLS)
                .ok_or(EnumError::LengthOverflow { dim, len: n })?;
        }
        let origin = (cells - 1) / 2;
        let mut moves = Vec::with_capacity(2 * dim);
        for s in strides {
            moves.push(s);
            moves.push(-s);
        }
        Ok(Self {
            cells,
            origin,
            moves,
        })
    }
}

struct Dfs<'a> {
    occ: Vec<u8>,
    moves: &'a [isize],
    abort: &'a AtomicBool,
    deadline: Option<Instant>,
    nodes: u64,
    aborted: bool,
    count: u128,
}

impl<'a> Dfs<'a> {
    fn descend(&mut self, pos: usize, remaining: usize) {
        self.nodes += 1;
        if self.nodes & 0x3f_ffff == 0 {
            if self.abort.load(Ordering::Relaxed) {
                self.aborted = true;
            } else if let Some(d) = self.deadline {
                if Instant::now() > d {
                    self.abort.store(true, Ordering::Relaxed);
                    self.aborted = true;
                }
            }
        }
        if self.aborted {
            return;
        }
        for &mv in self.moves {
            let np = (pos as isize + mv) as usize;
            if self.occ[np] != 0 {
                continue;
            }
            if remaining == 1 {
                self.count += 1;
            } else {
                self.occ[np] = 1;
                self.descend(np, remaining - 1);
                self.occ[np] = 0;
            }
        }
    }
}

/// Counts walks of exactly `n` steps; first step pinned, result NOT yet
/// multiplied by `2d`. Returns `None` when aborted by the deadline.
fn count_reduced_single(
    dim: usize,
    n: usize,
    deadline: Option<Instant>,
    abort: &AtomicBool,
) -> Result<Option<u128>> {
    let geo = BoxGeometry::new(dim, n)?;
    if n == 1 {
        return Ok(Some(1));
    }
    let p1 = (geo.origin as isize + geo.moves[0]) as usize;
    // Branch over second steps; each worker owns a bitmap.
    let branches: Vec<Option<u128>> = geo
        .moves
        .par_iter()
        .map(|&mv| {
            let p2 = (p1 as isize + mv) as usize;
            if p2 == geo.origin {
                return Some(0);
            }
            let mut dfs = Dfs {
                occ: vec![0u8; geo.cells],
                moves: &geo.moves,
                abort,
                deadline,
                nodes: 0,
                aborted: false,
                count: 0,
            };
            dfs.occ[geo.origin] = 1;
            dfs.occ[p1] = 1;
            if n == 2 {
                return Some(1);
            }
            dfs.occ[p2] = 1;
            dfs.descend(p2, n - 2);
            if dfs.aborted {
                None
            } else {
                Some(dfs.count)
            }
        })
        .collect();
    let mut total: u128 = 0;
    for b in branches {
        match b {
            Some(c) => {
                total = total
                    .checked_add(c)
                    .ok_or(EnumError::CountOverflow(n))?
            }
            None => return Ok(None),
        }
    }
    Ok(Some(total))
}

/// Exact counts `c_1..c_{n_max}` of self-avoiding walks on `Z^d`.
///
/// With a budget, enumeration stops at the last fully counted length and the
/// result is marked incomplete.
pub fn enumerate_saw(
    dim: usize,
    n_max: usize,
    budget: Option<Duration>,
) -> Result<EnumerationResult> {
    if dim == 0 || dim > 5 {
        return Err(EnumError::BadDimension(dim));
    }
    if n_max == 0 {
        return Err(EnumError::BadLength(n_max));
    }
    let start = Instant::now();
    let deadline = budget.map(|b| start + b);
    let mut counts = Vec::new();
    let mut seconds = Vec::new();
    let mut complete = true;
    for n in 1..=n_max {
        if let Some(d) = deadline {
            if Instant::now() > d {
                complete = false;
                break;
            }
        }
        let t0 = Instant::now();
        let abort = AtomicBool::new(false);
        match count_reduced_single(dim, n, deadline, &abort)? {
            Some(reduced) => {
                let total = reduced
                    .checked_mul(2 * dim as u128)
                    .ok_or(EnumError::CountOverflow(n))?;
                counts.push(BigUint::from(total));
                seconds.push(t0.elapsed().as_secs_f64());
            }
            None => {
                complete = false;
                break;
            }
        }
    }
    Ok(EnumerationResult {
        dim,
        requested_max: n_max,
        counts,
        seconds,
        complete,
    })
}

/// Enumeration without the first-step reduction; used to validate that the
/// symmetry factor is exact.
pub fn enumerate_saw_unreduced(dim: usize, n_max: usize) -> Result<EnumerationResult> {
    if dim == 0 || dim > 5 {
        return Err(EnumError::BadDimension(dim));
    }
    if n_max == 0 {
        return Err(EnumError::BadLength(n_max));
    }
    let abort = AtomicBool::new(false);
    let mut counts = Vec::new();
    let mut seconds = Vec::new();
    for n in 1..=n_max {
        let t0 = Instant::now();
        let geo = BoxGeometry::new(dim, n)?;
        let mut dfs = Dfs {
            occ: vec![0u8; geo.cells],
            moves: &geo.moves,
            abort: &abort,
            deadline: None,
            nodes: 0,
            aborted: false,
            count: 0,
        };
        dfs.occ[geo.origin] = 1;
        dfs.descend(geo.origin, n);
        counts.push(BigUint::from(dfs.count));
        seconds.push(t0.elapsed().as_secs_f64());
    }
    Ok(EnumerationResult {
        dim,
        requested_max: n_max,
        counts,
        seconds,
        complete: true,
    })
}
