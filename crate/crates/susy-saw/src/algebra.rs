//! Exterior algebra over 2M anticommuting generators with grid-sampled
//! coefficients.
//!
//! Generator 2x is psi_x and generator 2x+1 is psibar_x. A basis monomial
//! is a product of distinct generators in increasing index order, encoded
//! as a bit mask, so canonicalizing an arbitrary product reduces to the
//! parity of the transpositions that sort it. Coefficients are complex
//! functions sampled at a fixed list of points; every product acts
//! pointwise on the samples.

use crate::{Result, SusyError};
use num_complex::Complex64;
use rayon::prelude::*;

pub const MAX_SITES: usize = 3;

/// Coefficient vectors at least this long are combined in parallel.
const PAR_CHUNK: usize = 1 << 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Debug)]
pub struct GrassmannAlgebraElement {
    sites: usize,
    points: usize,
    /// Coefficient grid per monomial mask; None is identically zero.
    coeffs: Vec<Option<Vec<Complex64>>>,
}

/// Sign collected when e_A wedge e_B is merged into ascending order:
/// each generator of A counts the generators of B below it.
fn merge_sign(a: u32, b: u32) -> f64 {
    let mut swaps = 0;
    let mut rest = a;
    while rest != 0 {
        let bit = rest & rest.wrapping_neg();
        swaps += (b & (bit - 1)).count_ones();
        rest ^= bit;
    }
    if swaps % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn mul_add_into(out: &mut [Complex64], a: &[Complex64], b: &[Complex64], sign: f64) {
    if out.len() >= PAR_CHUNK {
        out.par_iter_mut()
            .zip(a.par_iter().zip(b.par_iter()))
            .for_each(|(o, (&x, &y))| *o += x * y * sign);
    } else {
        for i in 0..out.len() {
            out[i] += a[i] * b[i] * sign;
        }
    }
}

fn mul_into(out: &mut [Complex64], factor: &[Complex64]) {
    if out.len() >= PAR_CHUNK {
        out.par_iter_mut()
            .zip(factor.par_iter())
            .for_each(|(o, &f)| *o *= f);
    } else {
        for i in 0..out.len() {
            out[i] *= factor[i];
        }
    }
}

fn check_sites(sites: usize) -> Result<usize> {
    if sites == 0 || sites > MAX_SITES {
        return Err(SusyError::BadSiteCount(sites));
    }
    Ok(sites)
}

impl GrassmannAlgebraElement {
    pub fn zero(sites: usize, points: usize) -> Result<Self> {
        check_sites(sites)?;
        Ok(Self {
            sites,
            points,
            coeffs: vec![None; 1 << (2 * sites)],
        })
    }

    /// Constant multiple of the empty monomial.
    pub fn constant(sites: usize, points: usize, value: Complex64) -> Result<Self> {
        Self::scalar(sites, vec![value; points])
    }

    /// Pure 0-form with the given sample values.
    pub fn scalar(sites: usize, values: Vec<Complex64>) -> Result<Self> {
        let mut out = Self::zero(sites, values.len())?;
        out.coeffs[0] = Some(values);
        Ok(out)
    }

    pub fn generator(sites: usize, points: usize, index: usize) -> Result<Self> {
        Self::monomial(sites, &[index], vec![Complex64::new(1.0, 0.0); points])
    }

    /// Product of the listed generators, in the listed order, times the
    /// sample values. The monomial is canonicalized: sorting the generators
    /// flips the sign once per transposition, and a repeated generator
    /// annihilates the whole term.
    pub fn monomial(sites: usize, generators: &[usize], values: Vec<Complex64>) -> Result<Self> {
        let mut out = Self::zero(sites, values.len())?;
        let limit = 2 * sites;
        let mut mask = 0u32;
        let mut sign = 1.0;
        for &g in generators {
            if g >= limit {
                return Err(SusyError::BadGenerator { index: g, limit });
            }
            let bit = 1u32 << g;
            if mask & bit != 0 {
                return Ok(out);
            }
            if (mask >> (g + 1)).count_ones() % 2 == 1 {
                sign = -sign;
            }
            mask |= bit;
        }
        let mut values = values;
        if sign < 0.0 {
            for v in &mut values {
                *v = -*v;
            }
        }
        out.coeffs[mask as usize] = Some(values);
        Ok(out)
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn top_mask(&self) -> u32 {
        (1 << (2 * self.sites)) - 1
    }

    pub fn coefficient(&self, mask: u32) -> Option<&[Complex64]> {
        self.coeffs
            .get(mask as usize)
            .and_then(|c| c.as_deref())
    }

    pub fn body(&self) -> Option<&[Complex64]> {
        self.coefficient(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().flatten().all(|c| {
            c.iter()
                .all(|v| v.re == 0.0 && v.im == 0.0)
        })
    }

    pub(crate) fn has_terms(&self) -> bool {
        self.coeffs.iter().any(|c| c.is_some())
    }

    /// Common parity of the stored monomials, None when mixed. The zero
    /// element counts as even.
    pub fn parity(&self) -> Option<Parity> {
        let mut seen = None;
        for (mask, coeff) in self.coeffs.iter().enumerate() {
            if coeff.is_none() {
                continue;
            }
            let p = if (mask as u32).count_ones() % 2 == 0 {
                Parity::Even
            } else {
                Parity::Odd
            };
            match seen {
                None => seen = Some(p),
                Some(q) if q == p => {}
                Some(_) => return None,
            }
        }
        Some(seen.unwrap_or(Parity::Even))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.sites != other.sites {
            return Err(SusyError::SiteMismatch {
                left: self.sites,
                right: other.sites,
            });
        }
        if self.points != other.points {
            return Err(SusyError::PointMismatch {
                left: self.points,
                right: other.points,
            });
        }
        Ok(())
    }

    pub fn add_assign(&mut self, other: &Self) -> Result<()> {
        self.check_compatible(other)?;
        for (mask, coeff) in other.coeffs.iter().enumerate() {
            let Some(src) = coeff else { continue };
            let dst = self.coeffs[mask]
                .get_or_insert_with(|| vec![Complex64::new(0.0, 0.0); self.points]);
            for (d, &s) in dst.iter_mut().zip(src) {
                *d += s;
            }
        }
        Ok(())
    }

    pub fn scale(&mut self, factor: Complex64) {
        for coeff in self.coeffs.iter_mut().flatten() {
            for v in coeff.iter_mut() {
                *v *= factor;
            }
        }
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        out.scale(factor);
        out
    }

    /// Multiplies every coefficient pointwise by the same scalar samples.
    pub fn scaled_by_values(&self, values: &[Complex64]) -> Result<Self> {
        if values.len() != self.points {
            return Err(SusyError::PointMismatch {
                left: self.points,
                right: values.len(),
            });
        }
        let mut out = self.clone();
        for coeff in out.coeffs.iter_mut().flatten() {
            mul_into(coeff, values);
        }
        Ok(out)
    }

    /// Copy with the 0-form part dropped.
    pub fn without_body(&self) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = None;
        out
    }

    /// Graded product. Monomials sharing a generator vanish; the rest merge
    /// with the transposition-parity sign while coefficients multiply
    /// pointwise.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.sites, self.points)?;
        for (a, ca) in self.coeffs.iter().enumerate() {
            let Some(ca) = ca else { continue };
            for (b, cb) in other.coeffs.iter().enumerate() {
                let Some(cb) = cb else { continue };
                if a & b != 0 {
                    continue;
                }
                let sign = merge_sign(a as u32, b as u32);
                let dst = out.coeffs[a | b]
                    .get_or_insert_with(|| vec![Complex64::new(0.0, 0.0); self.points]);
                mul_add_into(dst, ca, cb, sign);
            }
        }
        Ok(out)
    }
}
