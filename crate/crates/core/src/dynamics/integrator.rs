use std::f64::consts::PI;

use num_complex::Complex64;

use super::params::SolverParams;
use super::rhs::{check_cutoff, nonlinear_part};
use crate::error::{Error, Result};
use crate::functionals::check_sigma;
use crate::spectral::cutoff::CutoffSpec;
use crate::spectral::field::SpectralField;
use crate::spectral::grid::GridSpec;

/// Integrating-factor RK4 (Lawson) for `u_t = i u_xx + N(u)`. The linear
/// propagator `e^{-4 pi^2 i n^2 t}` is applied exactly; RK4 acts on the
/// nonlinearity in the rotating frame.
#[derive(Debug, Clone)]
pub struct Propagator {
    grid: GridSpec,
    sigma: f64,
    cutoff: Option<CutoffSpec>,
    dt: f64,
    e_half: Vec<Complex64>,
    e_full: Vec<Complex64>,
}

impl Propagator {
    /// `dt` may be negative, which integrates backwards in time.
    pub fn new(grid: GridSpec, sigma: f64, cutoff: Option<CutoffSpec>, dt: f64) -> Result<Self> {
        check_sigma(sigma)?;
        check_cutoff(&SpectralField::zeros(grid), cutoff.as_ref())?;
        let phase = |n: i64, h: f64| Complex64::from_polar(1.0, -4.0 * PI * PI * (n * n) as f64 * h);
        let e_half = grid.modes().map(|n| phase(n, 0.5 * dt)).collect();
        let e_full = grid.modes().map(|n| phase(n, dt)).collect();
        Ok(Self { grid, sigma, cutoff, dt, e_half, e_full })
    }

    pub fn from_params(grid: GridSpec, params: &SolverParams) -> Result<Self> {
        Self::new(grid, params.sigma, params.cutoff, params.dt)
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    fn nonlinear(&self, u: &[Complex64]) -> Vec<Complex64> {
        let f = SpectralField::from_coeffs(self.grid, u.to_vec()).expect("finite state");
        nonlinear_part(&f, self.sigma, self.cutoff.as_ref()).coeffs().to_vec()
    }

    /// One step. Returns `NumericalOverflow` (with `t` set to `dt`) if the
    /// new state is not finite.
    pub fn step(&self, state: &SpectralField) -> Result<SpectralField> {
        let h = self.dt;
        let u = state.coeffs();
        let (eh, ef) = (&self.e_half, &self.e_full);
        let k1 = self.nonlinear(u);
        let u2: Vec<_> = (0..u.len()).map(|i| eh[i] * (u[i] + 0.5 * h * k1[i])).collect();
        let k2 = self.try_nonlinear(&u2)?;
        let u3: Vec<_> = (0..u.len()).map(|i| eh[i] * u[i] + 0.5 * h * k2[i]).collect();
        let k3 = self.try_nonlinear(&u3)?;
        let u4: Vec<_> = (0..u.len()).map(|i| ef[i] * u[i] + h * eh[i] * k3[i]).collect();
        let k4 = self.try_nonlinear(&u4)?;
        let out: Vec<_> = (0..u.len())
            .map(|i| ef[i] * u[i] + h / 6.0 * (ef[i] * k1[i] + 2.0 * eh[i] * (k2[i] + k3[i]) + k4[i]))
            .collect();
        if out.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NumericalOverflow { t: h });
        }
        SpectralField::from_coeffs(self.grid, out)
    }

    fn try_nonlinear(&self, u: &[Complex64]) -> Result<Vec<Complex64>> {
        if u.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NumericalOverflow { t: self.dt });
        }
        Ok(self.nonlinear(u))
    }
}

/// One integrating-factor RK4 step of size `dt` with the equation set by `params`.
pub fn step(state: &SpectralField, params: &SolverParams, dt: f64) -> Result<SpectralField> {
    Propagator::new(*state.grid(), params.sigma, params.cutoff, dt)?.step(state)
}
