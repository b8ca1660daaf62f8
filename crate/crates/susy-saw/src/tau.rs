//! Graphs on up to three sites and the even forms built over them.
//!
//! tau_x pairs the boson density phi_x phibar_x with the fermion pair
//! psi_x ^ psibar_x; tau_{Delta,x} threads the graph Laplacian through both
//! halves. The per-site elements are built once per coordinate block and
//! cached, so one block serves every coupling (g, nu).

use crate::algebra::GrassmannAlgebraElement;
use crate::grid::{check_potential, CoordinateBlock};
use crate::{Result, SusyError};
use num_complex::Complex64;

#[derive(Clone, Debug)]
pub struct SiteGraph {
    sites: usize,
    edges: Vec<(usize, usize)>,
}

impl SiteGraph {
    /// Simple undirected graph on 1..=3 sites: no loops, no parallel edges.
    pub fn new(sites: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if sites == 0 || sites > crate::MAX_SITES {
            return Err(SusyError::BadSiteCount(sites));
        }
        let mut seen = Vec::new();
        for &(a, b) in edges {
            let key = (a.min(b), a.max(b));
            if a == b || a >= sites || b >= sites || seen.contains(&key) {
                return Err(SusyError::BadEdge(a, b));
            }
            seen.push(key);
        }
        Ok(Self {
            sites,
            edges: edges.to_vec(),
        })
    }

    pub fn single_site() -> Self {
        Self {
            sites: 1,
            edges: Vec::new(),
        }
    }

    pub fn path(sites: usize) -> Result<Self> {
        let edges: Vec<(usize, usize)> = (1..sites).map(|x| (x - 1, x)).collect();
        Self::new(sites, &edges)
    }

    pub fn triangle() -> Self {
        Self::new(3, &[(0, 1), (1, 2), (0, 2)]).expect("fixed edge list")
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Graph Laplacian with unit edge weights: degree on the diagonal,
    /// -1 per edge.
    pub fn laplacian(&self) -> Vec<Vec<f64>> {
        let mut l = vec![vec![0.0; self.sites]; self.sites];
        for &(a, b) in &self.edges {
            l[a][a] += 1.0;
            l[b][b] += 1.0;
            l[a][b] -= 1.0;
            l[b][a] -= 1.0;
        }
        l
    }

    /// Jump-rate matrix of the matching continuous-time walk: the negated
    /// Laplacian, with zero row sums.
    pub fn walk_generator(&self) -> Vec<Vec<f64>> {
        let mut q = self.laplacian();
        for row in &mut q {
            for entry in row.iter_mut() {
                *entry = -*entry;
            }
        }
        q
    }
}

/// The cached per-site forms tau_x and tau_{Delta,x} over one coordinate
/// block. Both families are even, so they commute with everything.
#[derive(Debug)]
pub struct TauForm {
    sites: usize,
    points: usize,
    tau: Vec<GrassmannAlgebraElement>,
    tau_delta: Vec<GrassmannAlgebraElement>,
}

impl TauForm {
    pub fn build(graph: &SiteGraph, block: &CoordinateBlock) -> Result<Self> {
        if graph.sites() != block.sites() {
            return Err(SusyError::SiteMismatch {
                left: graph.sites(),
                right: block.sites(),
            });
        }
        let sites = graph.sites();
        let points = block.points();
        let lap = graph.laplacian();
        let mut tau = Vec::with_capacity(sites);
        let mut tau_delta = Vec::with_capacity(sites);
        for x in 0..sites {
            let density: Vec<Complex64> = (0..points)
                .map(|p| block.phi(p, x) * block.phi_bar(p, x))
                .collect();
            let mut t = GrassmannAlgebraElement::scalar(sites, density)?;
            t.add_assign(&GrassmannAlgebraElement::monomial(
                sites,
                &[2 * x, 2 * x + 1],
                vec![Complex64::new(1.0, 0.0); points],
            )?)?;
            tau.push(t);

            let coupled: Vec<Complex64> = (0..points)
                .map(|p| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for y in 0..sites {
                        if lap[x][y] != 0.0 {
                            acc += block.phi(p, x) * block.phi_bar(p, y) * lap[x][y];
                        }
                    }
                    acc
                })
                .collect();
            let mut d = GrassmannAlgebraElement::scalar(sites, coupled)?;
            for y in 0..sites {
                if lap[x][y] != 0.0 {
                    d.add_assign(&GrassmannAlgebraElement::monomial(
                        sites,
                        &[2 * x, 2 * y + 1],
                        vec![Complex64::new(lap[x][y], 0.0); points],
                    )?)?;
                }
            }
            tau_delta.push(d);
        }
        Ok(Self {
            sites,
            points,
            tau,
            tau_delta,
        })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn site_tau(&self, x: usize) -> &GrassmannAlgebraElement {
        &self.tau[x]
    }

    pub fn site_tau_delta(&self, x: usize) -> &GrassmannAlgebraElement {
        &self.tau_delta[x]
    }

    /// sum_x (g tau_x^2 + nu tau_x + tau_{Delta,x}), the exponent of the
    /// interacting weight. The square goes through the wedge product.
    pub fn interaction_exponent(&self, g: f64, nu: f64) -> Result<GrassmannAlgebraElement> {
        check_potential(g, nu)?;
        let mut total = GrassmannAlgebraElement::zero(self.sites, self.points)?;
        for x in 0..self.sites {
            if g != 0.0 {
                let square = self.tau[x].wedge(&self.tau[x])?;
                total.add_assign(&square.scaled(Complex64::new(g, 0.0)))?;
            }
            if nu != 0.0 {
                total.add_assign(&self.tau[x].scaled(Complex64::new(nu, 0.0)))?;
            }
            total.add_assign(&self.tau_delta[x])?;
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Parity;
    use crate::grid::QuadratureGrid;

    #[test]
    fn laplacian_rows_sum_to_zero() {
        for graph in [
            SiteGraph::single_site(),
            SiteGraph::path(2).unwrap(),
            SiteGraph::path(3).unwrap(),
            SiteGraph::triangle(),
        ] {
            for (x, row) in graph.laplacian().iter().enumerate() {
                assert_eq!(row.iter().sum::<f64>(), 0.0, "row {x}");
            }
            for (x, row) in graph.walk_generator().iter().enumerate() {
                assert_eq!(row.iter().sum::<f64>(), 0.0);
                for (y, &rate) in row.iter().enumerate() {
                    if x != y {
                        assert!(rate >= 0.0);
                    }
                }
            }
        }
        let l = SiteGraph::triangle().laplacian();
        assert_eq!(l[0], vec![2.0, -1.0, -1.0]);
    }

    #[test]
    fn malformed_graphs_are_rejected() {
        assert!(matches!(
            SiteGraph::new(2, &[(0, 0)]),
            Err(SusyError::BadEdge(0, 0))
        ));
        assert!(matches!(
            SiteGraph::new(2, &[(0, 2)]),
            Err(SusyError::BadEdge(0, 2))
        ));
        assert!(matches!(
            SiteGraph::new(3, &[(0, 1), (1, 0)]),
            Err(SusyError::BadEdge(1, 0))
        ));
        assert!(matches!(
            SiteGraph::new(4, &[]),
            Err(SusyError::BadSiteCount(4))
        ));
    }

    #[test]
    fn tau_forms_are_even() {
        let graph = SiteGraph::path(2).unwrap();
        let block = QuadratureGrid::with_cutoff(2, 2.0, 4).unwrap().full_block();
        let forms = TauForm::build(&graph, &block).unwrap();
        for x in 0..2 {
            assert_eq!(forms.site_tau(x).parity(), Some(Parity::Even));
            assert_eq!(forms.site_tau_delta(x).parity(), Some(Parity::Even));
        }
        let q = forms.interaction_exponent(1.0, 0.5).unwrap();
        assert_eq!(q.parity(), Some(Parity::Even));
    }

    #[test]
    fn exponent_coefficients_match_hand_formulas() {
        let graph = SiteGraph::path(2).unwrap();
        let block = QuadratureGrid::with_cutoff(2, 2.0, 6).unwrap().full_block();
        let forms = TauForm::build(&graph, &block).unwrap();
        let (g, nu) = (0.7, 0.3);
        let q = forms.interaction_exponent(g, nu).unwrap();

        let body = q.body().unwrap();
        let pair0 = q.coefficient(0b0011).unwrap();
        let cross = q.coefficient(0b1001).unwrap();
        let cross_rev = q.coefficient(0b0110).unwrap();
        for p in (0..block.points()).step_by(17) {
            let t0 = block.u(p, 0).powi(2) + block.v(p, 0).powi(2);
            let t1 = block.u(p, 1).powi(2) + block.v(p, 1).powi(2);
            // Bosonic part: g sum T_x^2 + nu sum T_x + |phi_0 - phi_1|^2.
            let diff = block.phi(p, 0) - block.phi(p, 1);
            let expect = g * (t0 * t0 + t1 * t1) + nu * (t0 + t1) + diff.norm_sqr();
            assert!((body[p].re - expect).abs() < 1e-12 * (1.0 + expect.abs()));
            assert!(body[p].im.abs() < 1e-12);
            // psi_0 ^ psibar_0 coefficient: 2 g T_0 + nu + degree.
            let expect0 = 2.0 * g * t0 + nu + 1.0;
            assert!((pair0[p].re - expect0).abs() < 1e-12);
            // psi_0 ^ psibar_1 keeps the Laplacian entry, and the reversed
            // pair psibar_0 ^ psi_1 picks up one transposition sign.
            assert_eq!(cross[p].re, -1.0);
            assert_eq!(cross_rev[p].re, 1.0);
        }
    }

    #[test]
    fn blocks_and_graphs_must_share_sites() {
        let graph = SiteGraph::path(2).unwrap();
        let block = QuadratureGrid::with_cutoff(1, 2.0, 4).unwrap().full_block();
        assert!(matches!(
            TauForm::build(&graph, &block),
            Err(SusyError::SiteMismatch { left: 2, right: 1 })
        ));
    }
}
