//! Growth-rate estimators and diagnostics on exact count sequences.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

/// Both standard estimators of the exponential growth rate:
/// `roots[i] = c_{i+1}^{1/(i+1)}` and `ratios[i] = c_{i+2}/c_{i+1}`.
#[derive(Debug, Clone)]
pub struct ConnectiveEstimates {
    pub roots: Vec<f64>,
    pub ratios: Vec<f64>,
}

fn big_to_f64(v: &BigUint) -> f64 {
    v.to_f64().expect("count convertible to f64")
}

pub fn connective_estimates(counts: &[BigUint]) -> ConnectiveEstimates {
    let roots = counts
        .iter()
        .enumerate()
        .map(|(i, c)| big_to_f64(c).powf(1.0 / (i + 1) as f64))
        .collect();
    let ratios = counts
        .windows(2)
        .map(|w| big_to_f64(&w[1]) / big_to_f64(&w[0]))
        .collect();
    ConnectiveEstimates { roots, ratios }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubmultiplicativityViolation {
    pub n: usize,
    pub m: usize,
}

/// Exact integer check of `c_{n+m} <= c_n * c_m` over every computed pair.
pub fn check_submultiplicative(
    counts: &[BigUint],
) -> std::result::Result<(), SubmultiplicativityViolation> {
    for n in 1..=counts.len() {
        for m in n..=counts.len() {
            if n + m > counts.len() {
                break;
            }
            let lhs = &counts[n + m - 1];
            let rhs = &counts[n - 1] * &counts[m - 1];
            if *lhs > rhs {
                return Err(SubmultiplicativityViolation { n, m });
            }
        }
    }
    Ok(())
}

/// Per-length slack in the two-sided growth bound
/// `μ^n <= c_n <= μ^n e^{B√n}`, reported in log scale. Both margins are
/// non-negative exactly when the corresponding inequality holds.
#[derive(Debug, Clone, Copy)]
pub struct BoundMargin {
    pub n: usize,
    /// `ln c_n - n ln μ`; >= 0 iff the lower bound holds.
    pub lower_log_margin: f64,
    /// `n ln μ + B√n - ln c_n`; >= 0 iff the upper bound holds.
    pub upper_log_margin: f64,
}

pub fn growth_bound_margins(counts: &[BigUint], mu: f64, b: f64) -> Vec<BoundMargin> {
    counts
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let n = i + 1;
            let ln_c = big_to_f64(c).ln();
            let base = n as f64 * mu.ln();
            BoundMargin {
                n,
                lower_log_margin: ln_c - base,
                upper_log_margin: base + b * (n as f64).sqrt() - ln_c,
            }
        })
        .collect()
}
