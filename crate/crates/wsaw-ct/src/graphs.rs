//! Finite-graph generators: symmetric rate matrices with zero row sums.

use crate::{Result, WsawError};
use rand::Rng;

pub struct GraphGenerator {
    nodes: usize,
    /// Outgoing edges per node as (target, rate), rates positive.
    edges: Vec<Vec<(usize, f64)>>,
    exit: Vec<f64>,
}

impl GraphGenerator {
    /// Accepts a generator matrix: nonnegative off-diagonal jump rates,
    /// each diagonal entry minus the row's off-diagonal sum, symmetric.
    pub fn new(q: &[Vec<f64>]) -> Result<Self> {
        let nodes = q.len();
        if nodes < 2 {
            return Err(WsawError::BadGenerator(
                "graph needs at least two nodes".into(),
            ));
        }
        if q.iter().any(|row| row.len() != nodes) {
            return Err(WsawError::BadGenerator("matrix must be square".into()));
        }
        for x in 0..nodes {
            for y in 0..x {
                if (q[x][y] - q[y][x]).abs() > 1e-12 {
                    return Err(WsawError::BadGenerator(format!(
                        "rates must be symmetric: q[{x}][{y}] = {} vs q[{y}][{x}] = {}",
                        q[x][y], q[y][x]
                    )));
                }
            }
        }
        let mut edges = Vec::with_capacity(nodes);
        let mut exit = Vec::with_capacity(nodes);
        for (x, row) in q.iter().enumerate() {
            let mut out = Vec::new();
            let mut total = 0.0;
            for (y, &r) in row.iter().enumerate() {
                if y == x {
                    continue;
                }
                if r < 0.0 {
                    return Err(WsawError::BadGenerator(format!(
                        "negative off-diagonal rate q[{x}][{y}] = {r}"
                    )));
                }
                if r > 0.0 {
                    out.push((y, r));
                    total += r;
                }
            }
            if (row[x] + total).abs() > 1e-9 * (1.0 + total) {
                return Err(WsawError::BadGenerator(format!(
                    "row {x} must sum to zero: diagonal {} vs -{total}",
                    row[x]
                )));
            }
            edges.push(out);
            exit.push(total);
        }
        Ok(Self { nodes, edges, exit })
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn exit_rate(&self, node: usize) -> f64 {
        self.exit[node]
    }

    pub fn jump<R: Rng + ?Sized>(&self, node: usize, rng: &mut R) -> usize {
        let u: f64 = rng.random::<f64>() * self.exit[node];
        let mut acc = 0.0;
        for &(y, r) in &self.edges[node] {
            acc += r;
            if u < acc {
                return y;
            }
        }
        self.edges[node].last().expect("positive exit rate").0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::{simulate_ct_walk, CtGenerator};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn two_site(rate: f64) -> Vec<Vec<f64>> {
        vec![vec![-rate, rate], vec![rate, -rate]]
    }

    #[test]
    fn two_site_holding_time_has_the_right_rate() {
        let generator = CtGenerator::graph(&two_site(3.0)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let horizon = 0.4;
        let runs = 200_000;
        let mut still = 0u32;
        for _ in 0..runs {
            let w = simulate_ct_walk(&generator, horizon, &mut rng).unwrap();
            if w.jumps() == 0 {
                still += 1;
            }
        }
        let p = (-3.0f64 * horizon).exp();
        let sigma = (p * (1.0 - p) / runs as f64).sqrt();
        assert!((still as f64 / runs as f64 - p).abs() < 4.0 * sigma);
    }

    #[test]
    fn walk_alternates_between_the_two_sites() {
        let generator = CtGenerator::graph(&two_site(1.0)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let w = simulate_ct_walk(&generator, 50.0, &mut rng).unwrap();
        assert!(w.jumps() > 20);
        for pair in w.sites.windows(2) {
            assert_ne!(pair[0][0], pair[1][0]);
        }
    }

    #[test]
    fn absorbing_node_stops_the_walk() {
        // Valid generator with an isolated pair and an isolated node.
        let q = vec![
            vec![0.0, 0.0, 0.0],
            vec![0.0, -1.0, 1.0],
            vec![0.0, 1.0, -1.0],
        ];
        let generator = CtGenerator::graph(&q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let w = simulate_ct_walk(&generator, 5.0, &mut rng).unwrap();
        assert_eq!(w.jumps(), 0, "start node 0 has no outgoing rate");
    }

    #[test]
    fn malformed_matrices_are_rejected() {
        assert!(GraphGenerator::new(&[vec![0.0]]).is_err());
        assert!(GraphGenerator::new(&[vec![0.0, 0.0], vec![0.0]]).is_err());
        let asymmetric = vec![vec![-1.0, 1.0], vec![2.0, -2.0]];
        assert!(GraphGenerator::new(&asymmetric).is_err());
        let negative = vec![vec![1.0, -1.0], vec![-1.0, 1.0]];
        assert!(GraphGenerator::new(&negative).is_err());
        let bad_rows = vec![vec![-1.0, 2.0], vec![2.0, -1.0]];
        assert!(GraphGenerator::new(&bad_rows).is_err());
    }
}
