use num_complex::Complex64;

use crate::spectral::cutoff::{apply_optional, CutoffSpec};
use crate::spectral::field::{derivative, to_physical, SpectralField};

/// `v`, `v_x`, `v_xx` and `|v|^2` sampled on the oversampled physical grid.
/// Every pointwise integrand is assembled from these four arrays.
#[derive(Debug, Clone)]
pub struct FieldSamples {
    pub v: Vec<Complex64>,
    pub dv: Vec<Complex64>,
    pub d2v: Vec<Complex64>,
    pub rho: Vec<f64>,
}

impl FieldSamples {
    pub fn new(f: &SpectralField) -> Self {
        let v = to_physical(f);
        let dv = to_physical(&derivative(f, 1));
        let d2v = to_physical(&derivative(f, 2));
        let rho = v.iter().map(|z| z.norm_sqr()).collect();
        Self { v, dv, d2v, rho }
    }

    /// Samples of `J_eps f` (or of `f` itself without a cutoff).
    pub fn with_cutoff(f: &SpectralField, cutoff: Option<&CutoffSpec>) -> Self {
        Self::new(&apply_optional(f, cutoff))
    }

    pub fn len(&self) -> usize {
        self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }

    /// Grid mean of `integrand(j)`, i.e. the integral over the unit torus.
    pub fn integrate<F>(&self, integrand: F) -> Complex64
    where
        F: Fn(usize) -> Complex64,
    {
        let m = self.len();
        (0..m).map(integrand).sum::<Complex64>() / m as f64
    }

    pub fn integrate_real<F>(&self, integrand: F) -> f64
    where
        F: Fn(usize) -> f64,
    {
        let m = self.len();
        (0..m).map(integrand).sum::<f64>() / m as f64
    }

    /// `|v_j|^{2p}`, regularized to `(|v_j|^2 + delta)^p` when `p < 0`.
    #[inline]
    pub fn rho_pow(&self, j: usize, p: f64, delta: f64) -> f64 {
        rho_pow(self.rho[j], p, delta)
    }
}

#[inline]
pub(crate) fn rho_pow(rho: f64, p: f64, delta: f64) -> f64 {
    if p == 0.0 {
        1.0
    } else if p < 0.0 {
        (rho + delta).powf(p)
    } else {
        rho.powf(p)
    }
}
