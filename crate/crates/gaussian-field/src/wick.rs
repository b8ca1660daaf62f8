//! Exact Gaussian expectations of polynomials by pair partitions.
//!
//! A polynomial in site variables is a sorted-monomial map. The one
//! nontrivial operation is expect_fluctuation: substitute phi_x -> phi_x +
//! zeta_x, integrate out zeta by summing over perfect matchings weighted by
//! the covariance, and return the resulting polynomial in phi. Iterating it
//! over two covariance pieces must reproduce integrating over their sum
//! exactly; progressive_check measures that residual coefficient by
//! coefficient.

use crate::covariance::Covariance;
use crate::{FieldError, Result};
use lattice_core::LatticeField;
use std::collections::BTreeMap;

/// Degrees above this make the matching sum explode; 11!! = 10395 terms.
pub(crate) const PAIRING_CAP: usize = 12;

const FAMILY_SHIFT: u32 = 28;
const SITE_MASK: u32 = (1 << FAMILY_SHIFT) - 1;
const PHI: u32 = 0;
const ZETA: u32 = 1;

fn var(family: u32, site: usize) -> u32 {
    debug_assert!(site as u32 <= SITE_MASK);
    family << FAMILY_SHIFT | site as u32
}

fn family_of(v: u32) -> u32 {
    v >> FAMILY_SHIFT
}

fn site_of(v: u32) -> usize {
    (v & SITE_MASK) as usize
}

/// Polynomial in real site variables with float coefficients; monomials are
/// kept sorted so equal polynomials have equal representations.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FieldPolynomial {
    terms: BTreeMap<Vec<u32>, f64>,
}

impl FieldPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        let mut p = Self::zero();
        p.add_term(c, vec![]);
        p
    }

    /// coeff * phi_{sites[0]} * phi_{sites[1]} * ... (repeats allowed).
    pub fn monomial(coeff: f64, sites: &[usize]) -> Self {
        let mut p = Self::zero();
        p.add_term(coeff, sites.iter().map(|&s| var(PHI, s)).collect());
        p
    }

    fn add_term(&mut self, coeff: f64, mut vars: Vec<u32>) {
        if coeff == 0.0 {
            return;
        }
        vars.sort_unstable();
        match self.terms.entry(vars) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if *e.get() == 0.0 {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (vars, &c) in &other.terms {
            out.add_term(c, vars.clone());
        }
        out
    }

    pub fn scale(&self, factor: f64) -> Self {
        let mut out = Self::zero();
        for (vars, &c) in &self.terms {
            out.add_term(c * factor, vars.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (va, &ca) in &self.terms {
            for (vb, &cb) in &other.terms {
                let mut vars = va.clone();
                vars.extend_from_slice(vb);
                out.add_term(ca * cb, vars);
            }
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|v| v.len()).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Constant term; the rest of the polynomial is ignored.
    pub fn constant_term(&self) -> f64 {
        self.terms.get(&Vec::new()).copied().unwrap_or(0.0)
    }

    /// Largest absolute coefficient difference against `other`.
    pub fn max_coeff_delta(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        for (vars, &c) in &self.terms {
            worst = worst.max((c - other.terms.get(vars).copied().unwrap_or(0.0)).abs());
        }
        for (vars, &c) in &other.terms {
            if !self.terms.contains_key(vars) {
                worst = worst.max(c.abs());
            }
        }
        worst
    }

    pub fn max_site(&self) -> Option<usize> {
        self.terms
            .keys()
            .flat_map(|vars| vars.iter().map(|&v| site_of(v)))
            .max()
    }

    /// Sorted distinct sites referenced by any variable family.
    pub fn support(&self) -> Vec<usize> {
        let set: std::collections::BTreeSet<usize> = self
            .terms
            .keys()
            .flat_map(|vars| vars.iter().map(|&v| site_of(v)))
            .collect();
        set.into_iter().collect()
    }

    /// Evaluates at a single-component field (all variables must be phi's).
    pub fn eval(&self, field: &LatticeField) -> f64 {
        let mut total = 0.0;
        for (vars, &c) in &self.terms {
            let mut prod = c;
            for &v in vars {
                debug_assert_eq!(family_of(v), PHI);
                prod *= field.get(site_of(v), 0);
            }
            total += prod;
        }
        total
    }

    /// Substitutes phi_x -> phi_x + zeta_x, returning a polynomial in both
    /// variable families. The input must be phi-only; the fluctuation
    /// variables wait to be integrated out by integrate_fluctuation.
    pub fn theta_shift(&self) -> Self {
        let mut out = Self::zero();
        for (vars, &coeff) in &self.terms {
            let n = vars.len();
            for mask in 0u32..1 << n {
                let expanded: Vec<u32> = vars
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| {
                        debug_assert_eq!(family_of(v), PHI);
                        if mask >> i & 1 == 1 {
                            var(ZETA, site_of(v))
                        } else {
                            v
                        }
                    })
                    .collect();
                out.add_term(coeff, expanded);
            }
        }
        out
    }

    /// Integrates out the zeta family with Cov(zeta_x, zeta_y) = cov(x, y),
    /// leaving a phi-only polynomial; phi variables ride along untouched.
    pub fn integrate_fluctuation(&self, cov: &dyn Fn(usize, usize) -> f64) -> Result<Self> {
        let mut out = Self::zero();
        for (vars, &coeff) in &self.terms {
            let mut phis = Vec::new();
            let mut zetas = Vec::new();
            for &v in vars {
                if family_of(v) == ZETA {
                    zetas.push(site_of(v));
                } else {
                    phis.push(v);
                }
            }
            if zetas.len() > PAIRING_CAP {
                return Err(FieldError::DegreeCap {
                    degree: zetas.len(),
                    cap: PAIRING_CAP,
                });
            }
            if zetas.len() % 2 == 1 {
                continue;
            }
            let weight = pairing_sum(&mut zetas, cov);
            if weight != 0.0 {
                out.add_term(coeff * weight, phis);
            }
        }
        Ok(out)
    }

    /// E_zeta[p(phi + zeta)] with Cov(zeta_x, zeta_y) = cov(x, y), returned
    /// as a polynomial in phi. Exact: the zeta variables are integrated out
    /// by summing over perfect matchings.
    pub fn expect_fluctuation(&self, cov: &dyn Fn(usize, usize) -> f64) -> Result<Self> {
        let mut out = Self::zero();
        for (vars, &coeff) in &self.terms {
            if vars.len() > PAIRING_CAP {
                return Err(FieldError::DegreeCap {
                    degree: vars.len(),
                    cap: PAIRING_CAP,
                });
            }
            // Expand the product of (phi + zeta) binomials over subsets:
            // choice bit 1 sends the variable to its zeta copy.
            let n = vars.len();
            for mask in 0u32..1 << n {
                let mut kept = Vec::new();
                let mut zetas = Vec::new();
                for (i, &v) in vars.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        zetas.push(site_of(v));
                    } else {
                        kept.push(v);
                    }
                }
                if zetas.len() % 2 == 1 {
                    continue;
                }
                let weight = pairing_sum(&mut zetas, cov);
                if weight != 0.0 {
                    out.add_term(coeff * weight, kept.clone());
                }
            }
        }
        Ok(out)
    }

    /// Full expectation E[p(zeta)] with the given covariance.
    pub fn expect_all(&self, cov: &dyn Fn(usize, usize) -> f64) -> Result<f64> {
        let mut total = 0.0;
        for (vars, &coeff) in &self.terms {
            if vars.len() > PAIRING_CAP {
                return Err(FieldError::DegreeCap {
                    degree: vars.len(),
                    cap: PAIRING_CAP,
                });
            }
            if vars.len() % 2 == 1 {
                continue;
            }
            let mut sites: Vec<usize> = vars.iter().map(|&v| site_of(v)).collect();
            total += coeff * pairing_sum(&mut sites, cov);
        }
        Ok(total)
    }
}

/// Sum over perfect matchings of the product of pair covariances.
fn pairing_sum(sites: &mut Vec<usize>, cov: &dyn Fn(usize, usize) -> f64) -> f64 {
    debug_assert!(sites.len() % 2 == 0);
    let Some(last) = sites.pop() else {
        return 1.0;
    };
    let mut total = 0.0;
    for i in 0..sites.len() {
        let partner = sites.remove(i);
        total += cov(last, partner) * pairing_sum(sites, cov);
        sites.insert(i, partner);
    }
    sites.push(last);
    total
}

/// Polynomial observable with a configurable degree cap (default 8, hard
/// limit set by the pairing engine).
#[derive(Clone, Debug)]
pub struct PolynomialObservable {
    poly: FieldPolynomial,
    cap: usize,
}

impl Default for PolynomialObservable {
    fn default() -> Self {
        Self::new()
    }
}

impl PolynomialObservable {
    pub fn new() -> Self {
        Self {
            poly: FieldPolynomial::zero(),
            cap: 8,
        }
    }

    pub fn with_degree_cap(cap: usize) -> Result<Self> {
        if cap > PAIRING_CAP {
            return Err(FieldError::DegreeCap {
                degree: cap,
                cap: PAIRING_CAP,
            });
        }
        Ok(Self {
            poly: FieldPolynomial::zero(),
            cap,
        })
    }

    pub fn term(mut self, coeff: f64, sites: &[usize]) -> Result<Self> {
        if sites.len() > self.cap {
            return Err(FieldError::DegreeCap {
                degree: sites.len(),
                cap: self.cap,
            });
        }
        self.poly = self.poly.add(&FieldPolynomial::monomial(coeff, sites));
        Ok(self)
    }

    pub fn polynomial(&self) -> &FieldPolynomial {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    pub fn eval(&self, field: &LatticeField) -> f64 {
        self.poly.eval(field)
    }
}

fn check_sites(p: &PolynomialObservable, cov: &Covariance) -> Result<()> {
    if let Some(site) = p.polynomial().max_site() {
        let sites = cov.torus().site_count();
        if site >= sites {
            return Err(FieldError::UnknownSite { site, sites });
        }
    }
    Ok(())
}

/// Exact Gaussian expectation E_C[p(phi)].
pub fn expect_poly(cov: &Covariance, p: &PolynomialObservable) -> Result<f64> {
    check_sites(p, cov)?;
    p.polynomial().expect_all(&|x, y| cov.entry(x, y))
}

/// Residual of the progressive-integration identity: integrating against
/// C' + C'' in one step versus C' then C''. Returns the largest coefficient
/// mismatch of the two phi-polynomials; the identity is exact, so anything
/// above float noise is a bug.
pub fn progressive_check(
    first: &Covariance,
    second: &Covariance,
    p: &PolynomialObservable,
) -> Result<f64> {
    check_sites(p, first)?;
    check_sites(p, second)?;
    let sum_cov = |x: usize, y: usize| first.entry(x, y) + second.entry(x, y);
    let one_shot = p.polynomial().expect_fluctuation(&sum_cov)?;
    let two_step = p
        .polynomial()
        .expect_fluctuation(&|x, y| first.entry(x, y))?
        .expect_fluctuation(&|x, y| second.entry(x, y))?;
    Ok(one_shot.max_coeff_delta(&two_step))
}
