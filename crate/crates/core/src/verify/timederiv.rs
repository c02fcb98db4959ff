use serde::{Deserialize, Serialize};

use crate::dynamics::{evolve, SolverParams, Trajectory};
use crate::error::{Error, Result};
use crate::functionals::{self, h2_seminorm_sqr, ModifiedEnergyParams};
use crate::spectral::cutoff::CutoffSpec;
use crate::spectral::field::SpectralField;
use crate::spectral::norms::sobolev_norm;

/// A scalar functional tracked along a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum TrackedFunctional {
    Mass,
    Energy,
    EnergyEps,
    /// `||u_xx||^2`.
    H2SeminormSqr,
    /// `||u||_{H^s}^2`.
    HsNormSqr { s: f64 },
    /// Correction integral `C_k` (k = 1, 2, 3) of `J_eps u`.
    Correction { k: u8 },
    ModifiedEnergy { alpha: f64, beta: f64 },
}

impl TrackedFunctional {
    pub fn evaluate(&self, u: &SpectralField, sigma: f64, delta_reg: f64, cutoff: Option<&CutoffSpec>) -> Result<f64> {
        Ok(match *self {
            TrackedFunctional::Mass => u.l2_norm_sqr(),
            TrackedFunctional::Energy => functionals::energy_e(u, sigma)?,
            TrackedFunctional::EnergyEps => functionals::energy_e_eps(u, sigma, cutoff)?,
            TrackedFunctional::H2SeminormSqr => h2_seminorm_sqr(u),
            TrackedFunctional::HsNormSqr { s } => sobolev_norm(u, s).powi(2),
            TrackedFunctional::Correction { k } => {
                if !(1..=3).contains(&k) {
                    return Err(Error::Input(format!("correction index must be 1, 2 or 3, got {k}")));
                }
                functionals::corrections(u, sigma, delta_reg, cutoff)?[k as usize - 1]
            }
            TrackedFunctional::ModifiedEnergy { alpha, beta } => {
                let p = ModifiedEnergyParams { alpha, beta, sigma, delta_reg };
                functionals::modified_energy(u, &p, cutoff)?
            }
        })
    }
}

/// Fourth-order finite-difference derivative of uniformly spaced samples:
/// central five-point stencil inside, one-sided five-point stencils at the
/// two points nearest each end.
pub fn fd_derivative(values: &[f64], h: f64) -> Result<Vec<f64>> {
    let n = values.len();
    if n < 5 {
        return Err(Error::Input(format!("need at least 5 records, got {n}")));
    }
    let f = values;
    let c = 1.0 / (12.0 * h);
    let mut out = vec![0.0; n];
    out[0] = c * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]);
    out[1] = c * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]);
    for i in 2..n - 2 {
        out[i] = c * (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]);
    }
    out[n - 2] = c * (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]);
    out[n - 1] = c * (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]);
    Ok(out)
}

/// `dF/dt` at every record of `traj`.
pub fn timederiv_probe(traj: &Trajectory, functional: &TrackedFunctional) -> Result<Vec<f64>> {
    if traj.len() < 5 {
        return Err(Error::Input(format!("need at least 5 records, got {}", traj.len())));
    }
    let h = traj.record_spacing();
    let spacing_ok = traj.times.windows(2).all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h);
    if !spacing_ok {
        return Err(Error::Input("records are not uniformly spaced".into()));
    }
    let p = &traj.params;
    let values = traj
        .states
        .iter()
        .map(|u| functional.evaluate(u, p.sigma, p.delta_reg, p.cutoff.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    fd_derivative(&values, h)
}

/// Five records at spacing `h` centred on `u`: two backward steps give the
/// starting state, then the flow is run forward four steps.
pub fn centred_trajectory(u: &SpectralField, params: &SolverParams, h: f64) -> Result<Trajectory> {
    let back = crate::dynamics::Propagator::new(*u.grid(), params.sigma, params.cutoff, -h)?;
    let start = back.step(&back.step(u)?)?;
    let p = params.clone().with_dt(h).with_t_end(4.0 * h).with_record_every(1);
    let traj = evolve(&start, &p)?;
    if traj.len() != 5 {
        return Err(Error::NumericalOverflow { t: traj.times.last().copied().unwrap_or(0.0) });
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_on_quartics() {
        let h = 0.1;
        let f: Vec<f64> = (0..7).map(|i| {
            let t = i as f64 * h;
            1.0 + 2.0 * t - t * t + 0.5 * t.powi(3) + 0.25 * t.powi(4)
        })
        .collect();
        let d = fd_derivative(&f, h).unwrap();
        for (i, di) in d.iter().enumerate() {
            let t = i as f64 * h;
            let exact = 2.0 - 2.0 * t + 1.5 * t * t + t.powi(3);
            assert!((di - exact).abs() < 1e-12, "{i}: {di} vs {exact}");
        }
    }

    #[test]
    fn linear_gives_constant() {
        let f: Vec<f64> = (0..9).map(|i| 3.0 - 0.5 * i as f64).collect();
        for d in fd_derivative(&f, 1.0).unwrap() {
            assert!((d + 0.5).abs() < 1e-13);
        }
    }

    #[test]
    fn too_few_records() {
        assert!(fd_derivative(&[1.0, 2.0, 3.0, 4.0], 1.0).is_err());
    }
}
