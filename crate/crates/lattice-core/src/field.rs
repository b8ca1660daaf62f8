//! Site-indexed fields with one or two real components per site.

use crate::{LatticeError, Result, TorusLattice};

/// Dense field over a torus; values stored site-major
/// (`values[site * components + c]`).
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeField {
    torus: TorusLattice,
    components: usize,
    values: Vec<f64>,
}

impl LatticeField {
    pub fn zeros(torus: TorusLattice, components: usize) -> Self {
        assert!(
            (1..=2).contains(&components),
            "component count {components} outside 1..=2"
        );
        Self {
            torus,
            components,
            values: vec![0.0; torus.site_count() * components],
        }
    }

    pub fn constant(torus: TorusLattice, components: usize, value: f64) -> Self {
        let mut f = Self::zeros(torus, components);
        f.values.fill(value);
        f
    }

    pub fn from_fn(
        torus: TorusLattice,
        components: usize,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Self {
        let mut out = Self::zeros(torus, components);
        for site in 0..torus.site_count() {
            for c in 0..components {
                out.set(site, c, f(site, c));
            }
        }
        out
    }

    pub fn from_values(torus: TorusLattice, components: usize, values: Vec<f64>) -> Result<Self> {
        let expected = torus.site_count() * components;
        if values.len() != expected {
            return Err(LatticeError::BadFieldLength {
                expected,
                actual: values.len(),
            });
        }
        Ok(Self {
            torus,
            components,
            values,
        })
    }

    pub fn torus(&self) -> &TorusLattice {
        &self.torus
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn get(&self, site: usize, component: usize) -> f64 {
        self.values[site * self.components + component]
    }

    pub fn set(&mut self, site: usize, component: usize, value: f64) {
        self.values[site * self.components + component] = value;
    }

    pub fn add(&mut self, site: usize, component: usize, value: f64) {
        self.values[site * self.components + component] += value;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn check_torus(&self, torus: &TorusLattice) -> Result<()> {
        if &self.torus != torus {
            return Err(LatticeError::TorusMismatch);
        }
        Ok(())
    }
}
