//! Stored exact counts for the simple cubic lattice (d = 3), n <= 36,
//! matching OEIS A001412. Used as golden data by tests and by the
//! ratio-estimator pipeline beyond the live enumeration budget.

use num_bigint::BigUint;

pub const CUBIC_COUNTS_CSV: &str = include_str!("../data/cubic_saw_counts.csv");

/// Parses the stored counts; index `i` holds `c_{i+1}`.
pub fn cubic_counts() -> Vec<BigUint> {
    let mut out = Vec::new();
    for (lineno, line) in CUBIC_COUNTS_CSV.lines().enumerate() {
        if lineno == 0 {
            continue; // header
        }
        let mut fields = line.split(',');
        let n: usize = fields
            .next()
            .and_then(|f| f.trim().parse().ok())
            .unwrap_or_else(|| panic!("bad n field on line {}", lineno + 1));
        let count: BigUint = fields
            .next()
            .and_then(|f| f.trim().parse().ok())
            .unwrap_or_else(|| panic!("bad count field on line {}", lineno + 1));
        assert_eq!(n, out.len() + 1, "count rows must be consecutive from 1");
        out.push(count);
    }
    assert_eq!(out.len(), 36);
    out
}
