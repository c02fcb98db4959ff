//! Scalar functionals of a field: conserved energies, the bad terms `B_1`,
//! `B_2`, `B_3`, the good terms `I_k`, the correction integrals of the
//! modified energy, and the small-data trapping function.
//!
//! Integrands are evaluated pointwise on the oversampled physical grid and
//! integrated by the grid mean. Factors `|v|^{2p}` with `p < 0` are
//! regularized as `(|v|^2 + delta)^p`.

mod samples;
pub mod small_data;

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use samples::FieldSamples;
pub use small_data::{estimate_c, small_data_h, threshold_m, trap_delta};

use crate::error::{domain, Result};
use crate::spectral::cutoff::{apply_optional, CutoffSpec};
use crate::spectral::field::SpectralField;

pub const DEFAULT_DELTA_REG: f64 = 1e-14;

pub(crate) fn check_sigma(sigma: f64) -> Result<()> {
    if sigma > 1.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("sigma must be a finite real > 1, got {sigma}")))
    }
}

/// `sum_n (2 pi n)^{2k} |u_hat(n)|^2 = || d^k u ||^2`.
pub fn derivative_norm_sqr(f: &SpectralField, k: u32) -> f64 {
    f.modes().map(|(n, c)| (2.0 * PI * n as f64).powi(2 * k as i32) * c.norm_sqr()).sum()
}

/// `|| d^2 u ||^2`, the leading term of the modified energy.
pub fn h2_seminorm_sqr(f: &SpectralField) -> f64 {
    derivative_norm_sqr(f, 2)
}

// ---------------------------------------------------------------------------
// Pointwise kernels on sampled fields.

impl FieldSamples {
    /// `Im int |v|^{2 sigma} v_x conj(v)`.
    pub fn nonlinear_energy_density(&self, sigma: f64) -> f64 {
        self.integrate_real(|j| self.rho_pow(j, sigma, 0.0) * (self.dv[j] * self.v[j].conj()).im)
    }

    /// `B_1 = int |v_xx|^2 d_x(|v|^{2 sigma})`, with `d_x(|v|^{2 sigma})`
    /// expanded pointwise as `sigma |v|^{2(sigma-1)} d_x |v|^2`.
    pub fn b1(&self, sigma: f64) -> f64 {
        self.integrate_real(|j| {
            let drho = 2.0 * (self.v[j].conj() * self.dv[j]).re;
            self.d2v[j].norm_sqr() * sigma * self.rho_pow(j, sigma - 1.0, 0.0) * drho
        })
    }

    /// `B_1` with `d_x(|v|^{2 sigma})` taken spectrally on the full grid.
    pub fn b1_spectral(&self, sigma: f64) -> f64 {
        let p: Vec<Complex64> = self.rho.iter().map(|&r| Complex64::new(r.powf(sigma), 0.0)).collect();
        let dp = crate::spectral::fft::grid_derivative(&p);
        self.integrate_real(|j| self.d2v[j].norm_sqr() * dp[j].re)
    }

    /// `B_2 = sigma Re int (conj v_xx)^2 v_x v |v|^{2(sigma-1)}`.
    pub fn b2(&self, sigma: f64) -> f64 {
        sigma
            * self.integrate_real(|j| {
                let a = self.d2v[j].conj();
                (a * a * self.dv[j] * self.v[j]).re * self.rho_pow(j, sigma - 1.0, 0.0)
            })
    }

    /// `B_2` in its conjugated form `sigma Re int (v_xx)^2 conj(v_x) conj(v) |v|^{2(sigma-1)}`.
    pub fn b2_conjugate(&self, sigma: f64) -> f64 {
        sigma
            * self.integrate_real(|j| {
                let a = self.d2v[j];
                (a * a * self.dv[j].conj() * self.v[j].conj()).re * self.rho_pow(j, sigma - 1.0, 0.0)
            })
    }

    /// `B_3 = sigma (sigma-1) Re int (v_xx)^2 v_x conj(v)^3 |v|^{2(sigma-2)}`.
    pub fn b3(&self, sigma: f64, delta: f64) -> f64 {
        sigma
            * (sigma - 1.0)
            * self.integrate_real(|j| {
                let a = self.d2v[j];
                let vb = self.v[j].conj();
                (a * a * self.dv[j] * vb * vb * vb).re * self.rho_pow(j, sigma - 2.0, delta)
            })
    }

    /// `I_k = Re int conj(v_xx) v_x^{3-k} conj(v_x)^k |v|^{2(sigma-2)} v^k conj(v)^{2-k}`.
    pub fn good_ik(&self, sigma: f64, k: u32, delta: f64) -> f64 {
        self.integrate_real(|j| {
            let (v, vb) = (self.v[j], self.v[j].conj());
            let (d, db) = (self.dv[j], self.dv[j].conj());
            let z = self.d2v[j].conj() * d.powu(3 - k) * db.powu(k) * v.powu(k) * vb.powu(2 - k);
            z.re * self.rho_pow(j, sigma - 2.0, delta)
        })
    }

    /// `int |v_xx| |v_x|^3 |v|^{2(sigma-1)}`, the pointwise majorant of every `I_k`.
    pub fn good_bound(&self, sigma: f64) -> f64 {
        self.integrate_real(|j| {
            self.d2v[j].norm() * self.dv[j].norm().powi(3) * self.rho_pow(j, sigma - 1.0, 0.0)
        })
    }

    /// `C_1 = Im int conj(v_xx) v_x |v|^{2 sigma}`.
    pub fn correction_c1(&self, sigma: f64) -> f64 {
        self.integrate_real(|j| (self.d2v[j].conj() * self.dv[j]).im * self.rho_pow(j, sigma, 0.0))
    }

    /// `C_2 = sigma Im int v_xx v_x conj(v)^2 |v|^{2(sigma-1)}`.
    pub fn correction_c2(&self, sigma: f64) -> f64 {
        sigma
            * self.integrate_real(|j| {
                let vb = self.v[j].conj();
                (self.d2v[j] * self.dv[j] * vb * vb).im * self.rho_pow(j, sigma - 1.0, 0.0)
            })
    }

    /// `C_3 = sigma (sigma-1) Im int v_x^3 conj(v)^3 |v|^{2(sigma-2)}`.
    pub fn correction_c3(&self, sigma: f64, delta: f64) -> f64 {
        sigma
            * (sigma - 1.0)
            * self.integrate_real(|j| {
                let vb = self.v[j].conj();
                (self.dv[j].powu(3) * vb * vb * vb).im * self.rho_pow(j, sigma - 2.0, delta)
            })
    }
}

// ---------------------------------------------------------------------------
// Conserved quantities.

/// `E(u) = 1/2 ||u_x||^2 + 1/(2 sigma + 2) Im int |u|^{2 sigma} u_x conj(u)`.
pub fn energy_e(f: &SpectralField, sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    let s = FieldSamples::new(f);
    Ok(0.5 * derivative_norm_sqr(f, 1) + s.nonlinear_energy_density(sigma) / (2.0 * sigma + 2.0))
}

/// Energy conserved by the cut-off flow:
/// `E_eps(u) = 1/2 ||u_x||^2 + 1/(2 sigma + 2) Im int |v|^{2 sigma} v_x conj(v)`, `v = J_eps u`.
pub fn energy_e_eps(f: &SpectralField, sigma: f64, cutoff: Option<&CutoffSpec>) -> Result<f64> {
    check_sigma(sigma)?;
    let s = FieldSamples::with_cutoff(f, cutoff);
    Ok(0.5 * derivative_norm_sqr(f, 1) + s.nonlinear_energy_density(sigma) / (2.0 * sigma + 2.0))
}

// ---------------------------------------------------------------------------
// Bad and good terms.

pub fn bad_b1(f: &SpectralField, sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    Ok(FieldSamples::new(f).b1(sigma))
}

pub fn bad_b2(f: &SpectralField, sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    Ok(FieldSamples::new(f).b2(sigma))
}

pub fn bad_b3(f: &SpectralField, sigma: f64, delta_reg: f64) -> Result<f64> {
    check_sigma(sigma)?;
    Ok(FieldSamples::new(f).b3(sigma, delta_reg))
}

pub fn good_ik(f: &SpectralField, sigma: f64, k: u32, delta_reg: f64) -> Result<f64> {
    check_sigma(sigma)?;
    if k > 2 {
        return Err(domain(format!("I_k is defined for k in {{0, 1, 2}}, got {k}")));
    }
    Ok(FieldSamples::new(f).good_ik(sigma, k, delta_reg))
}

pub fn good_bound(f: &SpectralField, sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    Ok(FieldSamples::new(f).good_bound(sigma))
}

// ---------------------------------------------------------------------------
// Modified energy.

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModifiedEnergyParams {
    pub alpha: f64,
    pub beta: f64,
    pub sigma: f64,
    #[serde(default = "default_delta")]
    pub delta_reg: f64,
}

fn default_delta() -> f64 {
    DEFAULT_DELTA_REG
}

impl ModifiedEnergyParams {
    /// `alpha = 2`, `beta = 2 / (sigma + 1)`: the choice that removes every bad term.
    pub fn canonical(sigma: f64) -> Self {
        Self { alpha: 2.0, beta: canonical_beta(sigma), sigma, delta_reg: DEFAULT_DELTA_REG }
    }

    pub fn new(alpha: f64, beta: f64, sigma: f64) -> Self {
        Self { alpha, beta, sigma, delta_reg: DEFAULT_DELTA_REG }
    }

    pub fn with_delta(mut self, delta_reg: f64) -> Self {
        self.delta_reg = delta_reg;
        self
    }

    /// Weights `(w_1, w_2, w_3)` in `E = ||u_xx||^2 + w_1 C_1 + w_2 C_2 + w_3 C_3`.
    pub fn weights(&self) -> [f64; 3] {
        [-self.alpha, -self.beta, -0.5 * self.beta]
    }

    /// Coefficients of `B_1` and `B_2` left in `dE/dt`: `(2 alpha - 4, 2 alpha - beta (sigma+1) - 2)`.
    pub fn predicted_bad_coefficients(&self) -> (f64, f64) {
        (2.0 * self.alpha - 4.0, 2.0 * self.alpha - self.beta * (self.sigma + 1.0) - 2.0)
    }
}

pub fn canonical_beta(sigma: f64) -> f64 {
    2.0 / (sigma + 1.0)
}

/// The three correction integrals `(C_1, C_2, C_3)` of `v = J_eps u`.
pub fn corrections(f: &SpectralField, sigma: f64, delta_reg: f64, cutoff: Option<&CutoffSpec>) -> Result<[f64; 3]> {
    check_sigma(sigma)?;
    let s = FieldSamples::with_cutoff(f, cutoff);
    Ok([s.correction_c1(sigma), s.correction_c2(sigma), s.correction_c3(sigma, delta_reg)])
}

/// `E_{alpha,beta}(u) = ||u_xx||^2 - alpha C_1(v) - beta C_2(v) - (beta/2) C_3(v)`, `v = J_eps u`.
///
/// With `C_2` carrying the factor `sigma` and `C_3` the factor
/// `sigma (sigma-1)`, the `B_3` contributions of `dC_2/dt` (`+3 B_3`) and
/// `dC_3/dt` (`-6 B_3`) cancel for every `beta`.
pub fn modified_energy(f: &SpectralField, params: &ModifiedEnergyParams, cutoff: Option<&CutoffSpec>) -> Result<f64> {
    let c = corrections(f, params.sigma, params.delta_reg, cutoff)?;
    let w = params.weights();
    Ok(h2_seminorm_sqr(f) + w[0] * c[0] + w[1] * c[1] + w[2] * c[2])
}

/// Closed-form modified energy at `alpha = 2`, `beta = 2/(sigma+1)`, coded
/// term by term with its own quadrature loop as a cross-check of
/// [`modified_energy`]:
/// `||u_xx||^2 - 2 Im int conj(v_xx) v_x |v|^{2s}
///  - 2s/(s+1) Im int v_xx v_x conj(v)^2 |v|^{2(s-1)}
///  - s(s-1)/(s+1) Im int v_x^3 conj(v)^3 |v|^{2(s-2)}`.
pub fn canonical_modified_energy(f: &SpectralField, sigma: f64, delta_reg: f64, cutoff: Option<&CutoffSpec>) -> Result<f64> {
    check_sigma(sigma)?;
    let v = apply_optional(f, cutoff);
    let s = FieldSamples::new(&v);
    let k1 = -2.0;
    let k2 = -2.0 * sigma / (sigma + 1.0);
    let k3 = -sigma * (sigma - 1.0) / (sigma + 1.0);
    let mut acc = 0.0;
    for j in 0..s.len() {
        let (v, vx, vxx) = (s.v[j], s.dv[j], s.d2v[j]);
        let r = v.norm_sqr();
        let vb = v.conj();
        let t1 = (vxx.conj() * vx).im * r.powf(sigma);
        let t2 = (vxx * vx * vb * vb).im * r.powf(sigma - 1.0);
        let t3 = (vx * vx * vx * vb * vb * vb).im * samples::rho_pow(r, sigma - 2.0, delta_reg);
        acc += k1 * t1 + k2 * t2 + k3 * t3;
    }
    Ok(h2_seminorm_sqr(f) + acc / s.len() as f64)
}

// ---------------------------------------------------------------------------
// Dump.

/// Every functional of a single field, keyed by name.
pub fn dump(
    f: &SpectralField,
    params: &ModifiedEnergyParams,
    cutoff: Option<&CutoffSpec>,
) -> Result<BTreeMap<String, f64>> {
    let sigma = params.sigma;
    check_sigma(sigma)?;
    let v = apply_optional(f, cutoff);
    let s = FieldSamples::new(&v);
    let c = [s.correction_c1(sigma), s.correction_c2(sigma), s.correction_c3(sigma, params.delta_reg)];
    let w = params.weights();
    let mut out = BTreeMap::new();
    let mut put = |k: &str, x: f64| {
        out.insert(k.to_string(), x);
    };
    put("l2", f.l2_norm());
    put("h1", crate::spectral::norms::sobolev_norm(f, 1.0));
    put("h2", crate::spectral::norms::sobolev_norm(f, 2.0));
    put("E", energy_e(f, sigma)?);
    put("E_eps", energy_e_eps(f, sigma, cutoff)?);
    put("B1", s.b1(sigma));
    put("B1_spectral", s.b1_spectral(sigma));
    put("B2", s.b2(sigma));
    put("B3", s.b3(sigma, params.delta_reg));
    for k in 0..3 {
        put(&format!("I{k}"), s.good_ik(sigma, k, params.delta_reg));
    }
    put("I_bound", s.good_bound(sigma));
    put("C1", c[0]);
    put("C2", c[1]);
    put("C3", c[2]);
    put("mod_energy", h2_seminorm_sqr(f) + w[0] * c[0] + w[1] * c[1] + w[2] * c[2]);
    Ok(out)
}
