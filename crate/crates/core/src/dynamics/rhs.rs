use num_complex::Complex64;

use super::params::SolverParams;
use crate::error::{config, Result};
use crate::functionals::check_sigma;
use crate::spectral::cutoff::{apply_optional, CutoffSpec};
use crate::spectral::field::{derivative, to_physical, to_spectral, SpectralField};

/// `P_N(|v|^{2 sigma} v_x)`: the product is formed on the oversampled grid and
/// truncated back to the field's mode range.
pub(crate) fn flux(v: &SpectralField, sigma: f64) -> SpectralField {
    let mut w = to_physical(v);
    let dw = to_physical(&derivative(v, 1));
    for (a, d) in w.iter_mut().zip(&dw) {
        *a = d * a.norm_sqr().powf(sigma);
    }
    to_spectral(&w, *v.grid()).expect("sample count matches grid")
}

/// `g(u) = i |u|^{2 sigma} u_x`, band-limited to the grid.
pub fn nonlinearity_g(f: &SpectralField, sigma: f64) -> Result<SpectralField> {
    check_sigma(sigma)?;
    Ok(flux(f, sigma).scale(Complex64::new(0.0, 1.0)))
}

/// Nonlinear part of the right-hand side, `-J(|Ju|^{2 sigma} d_x Ju)`.
pub(crate) fn nonlinear_part(f: &SpectralField, sigma: f64, cutoff: Option<&CutoffSpec>) -> SpectralField {
    let v = apply_optional(f, cutoff);
    let n = apply_optional(&flux(&v, sigma), cutoff);
    n.scale(Complex64::new(-1.0, 0.0))
}

pub(crate) fn check_cutoff(f: &SpectralField, cutoff: Option<&CutoffSpec>) -> Result<()> {
    match cutoff {
        Some(c) if c.max_mode() > f.max_mode() => Err(config(format!(
            "cutoff K = {} exceeds grid max_mode = {}",
            c.max_mode(),
            f.max_mode()
        ))),
        _ => Ok(()),
    }
}

/// `i u_xx - J(|Ju|^{2 sigma} d_x Ju)`; without a cutoff the `J` factors are dropped.
pub fn rhs_approx(f: &SpectralField, params: &SolverParams) -> Result<SpectralField> {
    check_sigma(params.sigma)?;
    let cutoff = params.cutoff.as_ref();
    check_cutoff(f, cutoff)?;
    let lin = derivative(f, 2).scale(Complex64::new(0.0, 1.0));
    Ok(&lin + &nonlinear_part(f, params.sigma, cutoff))
}
