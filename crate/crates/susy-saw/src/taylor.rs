//! Taylor expansion of smooth functions along the nilpotent direction.
//!
//! An even form splits into a scalar body and a nilpotent remainder N whose
//! monomials all have degree at least 2, so
//! f(body + N) = sum_k f^(k)(body) N^k / k! stops at k = M on M sites:
//! N^{M+1} would need more than 2M generators.

use crate::algebra::{GrassmannAlgebraElement, Parity};
use crate::{Result, SusyError};
use num_complex::Complex64;

/// k-th derivative of t -> exp(-t).
pub fn exp_neg_derivative(body: Complex64, order: usize) -> Complex64 {
    let value = (-body).exp();
    if order % 2 == 0 {
        value
    } else {
        -value
    }
}

/// Applies a smooth scalar function to an even form. `derivative(b, k)`
/// must return f^(k)(b).
pub fn smooth_function_of_form<F>(
    derivative: F,
    tau: &GrassmannAlgebraElement,
) -> Result<GrassmannAlgebraElement>
where
    F: Fn(Complex64, usize) -> Complex64,
{
    if tau.parity() != Some(Parity::Even) {
        return Err(SusyError::OddForm);
    }
    let sites = tau.sites();
    let points = tau.points();
    let body: Vec<Complex64> = match tau.body() {
        Some(b) => b.to_vec(),
        None => vec![Complex64::new(0.0, 0.0); points],
    };
    let nilpotent = tau.without_body();

    let mut result = GrassmannAlgebraElement::zero(sites, points)?;
    let mut power = GrassmannAlgebraElement::constant(sites, points, Complex64::new(1.0, 0.0))?;
    let mut inv_factorial = 1.0;
    for k in 0..=sites {
        if k > 0 {
            power = power.wedge(&nilpotent)?;
            inv_factorial /= k as f64;
            if !power.has_terms() {
                break;
            }
        }
        let coeff: Vec<Complex64> = body
            .iter()
            .map(|&b| derivative(b, k) * inv_factorial)
            .collect();
        result.add_assign(&power.scaled_by_values(&coeff)?)?;
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::QuadratureGrid;
    use crate::tau::{SiteGraph, TauForm};

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-14 * (1.0 + b.norm())
    }

    #[test]
    fn exponential_of_one_site_tau() {
        let block = QuadratureGrid::with_cutoff(1, 3.0, 8).unwrap().full_block();
        let forms = TauForm::build(&SiteGraph::single_site(), &block).unwrap();
        let e = smooth_function_of_form(exp_neg_derivative, forms.site_tau(0)).unwrap();
        // exp(-tau) = exp(-phi phibar) (1 - psi ^ psibar).
        let body = e.body().unwrap();
        let pair = e.coefficient(0b11).unwrap();
        for p in 0..block.points() {
            let t = block.phi(p, 0).norm_sqr();
            let gauss = Complex64::new((-t).exp(), 0.0);
            assert!(close(body[p], gauss));
            assert!(close(pair[p], -gauss));
        }
    }

    #[test]
    fn two_site_exponential_alternates_with_factorials() {
        let block = QuadratureGrid::with_cutoff(2, 2.5, 4).unwrap().full_block();
        let forms = TauForm::build(&SiteGraph::new(2, &[]).unwrap(), &block).unwrap();
        let mut total = forms.site_tau(0).clone();
        total.add_assign(forms.site_tau(1)).unwrap();
        let e = smooth_function_of_form(exp_neg_derivative, &total).unwrap();
        // exp(-tau_0 - tau_1) carries (-1)^m / m! on the m-pair terms, and
        // the two-pair term appears twice in the square.
        for p in 0..block.points() {
            let t = block.phi(p, 0).norm_sqr() + block.phi(p, 1).norm_sqr();
            let gauss = Complex64::new((-t).exp(), 0.0);
            assert!(close(e.body().unwrap()[p], gauss));
            assert!(close(e.coefficient(0b0011).unwrap()[p], -gauss));
            assert!(close(e.coefficient(0b1100).unwrap()[p], -gauss));
            assert!(close(e.coefficient(0b1111).unwrap()[p], gauss));
        }
        for mask in [0b0001u32, 0b0110, 0b1011] {
            assert!(e.coefficient(mask).is_none());
        }
    }

    #[test]
    fn constant_function_ignores_the_nilpotent_part() {
        let block = QuadratureGrid::with_cutoff(1, 2.0, 6).unwrap().full_block();
        let forms = TauForm::build(&SiteGraph::single_site(), &block).unwrap();
        let one = smooth_function_of_form(
            |_, k| {
                if k == 0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            },
            forms.site_tau(0),
        )
        .unwrap();
        assert!(one.body().unwrap().iter().all(|&v| v == Complex64::new(1.0, 0.0)));
        assert!(one.coefficient(0b11).is_none() || one.coefficient(0b11).unwrap().iter().all(|&v| v.norm() == 0.0));
    }

    #[test]
    fn bosonic_input_reduces_to_pointwise_application() {
        let values: Vec<Complex64> = (0..5)
            .map(|i| Complex64::new(0.3 * i as f64, 0.1))
            .collect();
        let tau = GrassmannAlgebraElement::scalar(1, values.clone()).unwrap();
        let e = smooth_function_of_form(exp_neg_derivative, &tau).unwrap();
        let body = e.body().unwrap();
        for (out, v) in body.iter().zip(&values) {
            assert!(close(*out, (-v).exp()));
        }
        assert!(e.coefficient(0b11).is_none());
    }

    #[test]
    fn odd_forms_are_rejected() {
        let psi = GrassmannAlgebraElement::generator(1, 2, 0).unwrap();
        assert!(matches!(
            smooth_function_of_form(exp_neg_derivative, &psi),
            Err(SusyError::OddForm)
        ));
        let mut mixed = GrassmannAlgebraElement::constant(1, 2, Complex64::new(1.0, 0.0)).unwrap();
        mixed.add_assign(&psi).unwrap();
        assert!(matches!(
            smooth_function_of_form(exp_neg_derivative, &mixed),
            Err(SusyError::OddForm)
        ));
    }
}
