//! Integration of forms: top coefficient, Lebesgue measure, one constant.
//!
//! The top monomial psi_0 ^ psibar_0 ^ ... equals (-1/pi)^M du_0 ^ dv_0 ...,
//! since each d phi ^ d phibar contracts to -2i du ^ dv and every fermion
//! generator carries a factor (2 pi i)^{-1/2}. The constant is pinned
//! empirically: the one-site Gaussian reference must integrate to exactly 1,
//! and the calibration test asserts that before anything else leans on it.
//! Lower-degree monomials integrate to zero by definition.

use crate::algebra::GrassmannAlgebraElement;
use crate::grid::QuadratureGrid;
use crate::{Result, SusyError};
use num_complex::Complex64;

/// Largest tolerated fraction of integrand mass on the boundary shell.
pub const TAIL_LIMIT: f64 = 1e-6;

/// Measure factor carried by each fermion pair, to the M-th power.
pub fn pair_measure_factor(sites: usize) -> f64 {
    (-std::f64::consts::FRAC_1_PI).powi(sites as i32)
}

pub(crate) struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    pub(crate) fn new() -> Self {
        Self {
            sum: 0.0,
            carry: 0.0,
        }
    }

    pub(crate) fn add(&mut self, value: f64) {
        let y = value - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub(crate) fn total(&self) -> f64 {
        self.sum
    }
}

/// Integrates a form over the grid: the top coefficient against the
/// Lebesgue measure times the fermion-pair factor, everything else zero.
/// Fails when more than TAIL_LIMIT of the integrand mass sits on the
/// outermost node layer, a sign the cutoff truncates the integral.
pub fn berezin_integrate(
    form: &GrassmannAlgebraElement,
    grid: &QuadratureGrid,
) -> Result<Complex64> {
    if form.sites() != grid.sites() {
        return Err(SusyError::SiteMismatch {
            left: form.sites(),
            right: grid.sites(),
        });
    }
    if form.points() != grid.total_points() {
        return Err(SusyError::GridMismatch {
            points: form.points(),
            grid: grid.total_points(),
        });
    }
    let Some(top) = form.coefficient(form.top_mask()) else {
        return Ok(Complex64::new(0.0, 0.0));
    };
    let mut re = Kahan::new();
    let mut im = Kahan::new();
    let mut shell = Kahan::new();
    let mut total = Kahan::new();
    for (index, value) in top.iter().enumerate() {
        re.add(value.re);
        im.add(value.im);
        let mass = value.norm();
        total.add(mass);
        if grid.is_boundary_point(index) {
            shell.add(mass);
        }
    }
    if total.total() > 0.0 {
        let tail = shell.total() / total.total();
        if tail > TAIL_LIMIT {
            return Err(SusyError::RefineCutoff { tail });
        }
    }
    let scale = grid.cell_weight() * pair_measure_factor(grid.sites());
    Ok(Complex64::new(re.total(), im.total()) * scale)
}
