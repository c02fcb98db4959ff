//! Long-horizon check that small data stay below the trapping threshold `m`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{ProbeReport, Verdict};
use crate::dynamics::{evolve, SolverParams, Termination};
use crate::error::{config, Result};
use crate::functionals::small_data::{estimate_c, threshold_m, trap_delta};
use crate::spectral::cutoff::CutoffSpec;
use crate::spectral::field::SpectralField;
use crate::spectral::grid::GridSpec;
use crate::spectral::norms::sobolev_norm;
use crate::spectral::random::{random_band_with_h1, DEFAULT_DECAY};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmallDataConfig {
    pub sigma: f64,
    pub h1: f64,
    pub t_end: f64,
    pub dt: f64,
    pub max_mode: usize,
    pub oversample: usize,
    pub epsilon: f64,
    pub band: usize,
    pub seed: u64,
    /// Number of random data in the family.
    pub members: usize,
    pub record_every: usize,
    /// Fields sampled by [`estimate_c`].
    pub c_samples: usize,
    /// Largest allowed `sup_t ||u||_{H^1} / ||phi||_{H^1}`.
    pub growth_limit: f64,
}

impl Default for SmallDataConfig {
    fn default() -> Self {
        Self {
            sigma: 2.0,
            h1: 0.05,
            t_end: 50.0,
            dt: 2e-3,
            max_mode: 32,
            oversample: 4,
            epsilon: 1.0 / 16.0,
            band: 4,
            seed: 3,
            members: 3,
            record_every: 50,
            c_samples: 2000,
            growth_limit: 2.0,
        }
    }
}

impl SmallDataConfig {
    pub fn grid(&self) -> Result<GridSpec> {
        GridSpec::new(self.max_mode, self.oversample)
    }

    pub fn params(&self) -> Result<SolverParams> {
        Ok(SolverParams::new(self.sigma, Some(CutoffSpec::new(self.epsilon)?), self.dt, self.t_end)
            .with_record_every(self.record_every))
    }

    pub fn family(&self) -> Result<Vec<SpectralField>> {
        let g = self.grid()?;
        Ok((0..self.members as u64)
            .map(|i| random_band_with_h1(g, self.seed.wrapping_add(i), self.band, DEFAULT_DECAY, self.h1))
            .collect())
    }
}

/// Largest `H^1` norm reached along the run, and whether it ran to `t_end`.
pub fn sup_h1(phi: &SpectralField, params: &SolverParams) -> Result<(f64, bool)> {
    let traj = evolve(phi, params)?;
    let sup = traj.diagnostics.iter().map(|r| r.h1).fold(0.0, f64::max);
    Ok((sup, traj.termination == Termination::Completed))
}

/// Runs every datum to `t_end`; pass iff each stays below `m` and within
/// `growth_limit` of its initial size. Data at or above `delta` are a
/// configuration error since the trapping argument does not cover them.
pub fn small_data_trap_probe(family: &[SpectralField], params: &SolverParams, c_est: f64, growth_limit: f64, seed: u64) -> Result<ProbeReport> {
    let sigma = params.sigma;
    let m = threshold_m(sigma, c_est)?;
    let delta = trap_delta(sigma, c_est)?;
    let norms: Vec<f64> = family.iter().map(|f| sobolev_norm(f, 1.0)).collect();
    if let Some(n) = norms.iter().find(|n| **n >= delta) {
        return Err(config(format!("||phi||_H1 = {n} is not below the trapping size delta = {delta}")));
    }
    let runs = family.par_iter().map(|f| sup_h1(f, params)).collect::<Result<Vec<_>>>()?;
    let mut ok = true;
    let mut worst_growth: f64 = 0.0;
    let mut sup_all: f64 = 0.0;
    for ((sup, completed), n0) in runs.iter().zip(&norms) {
        sup_all = sup_all.max(*sup);
        let growth = if *n0 > 0.0 { sup / n0 } else { 1.0 };
        worst_growth = worst_growth.max(growth);
        ok &= *completed && *sup < m && (*n0 == 0.0 && *sup == 0.0 || growth <= growth_limit);
    }
    let residuals: Vec<f64> = runs.iter().map(|r| r.0 / m).collect();
    let cfg = serde_json::json!({ "sigma": sigma, "t_end": params.t_end, "dt": params.dt, "c_est": c_est, "growth_limit": growth_limit });
    Ok(ProbeReport::new("smalldata", seed, &residuals, Verdict::from_bool(ok), cfg)
        .with_constant("c_est", c_est)
        .with_constant("m", m)
        .with_constant("delta", delta)
        .with_constant("sup_h1", sup_all)
        .with_constant("h1_growth_max", worst_growth))
}

pub fn small_data_probe(cfg: &SmallDataConfig) -> Result<ProbeReport> {
    let c = estimate_c(cfg.grid()?, cfg.sigma, cfg.c_samples, cfg.seed)?;
    let rep = small_data_trap_probe(&cfg.family()?, &cfg.params()?, c, cfg.growth_limit, cfg.seed)?;
    Ok(ProbeReport { config: serde_json::to_value(cfg)?, ..rep })
}

/// Bisection on the amplitude `a` of `a * shape` for the largest datum whose
/// run stays below `m` up to `params.t_end`. Assumes trapping is monotone in `a`.
pub fn largest_trapped_amplitude(shape: &SpectralField, params: &SolverParams, m: f64, hi: f64, iterations: usize) -> Result<f64> {
    let trapped = |a: f64| -> Result<bool> {
        let (sup, completed) = sup_h1(&(shape * a), params)?;
        Ok(completed && sup < m)
    };
    let (mut lo, mut hi) = (0.0, hi);
    if trapped(hi)? {
        return Ok(hi);
    }
    for _ in 0..iterations {
        let mid = 0.5 * (lo + hi);
        if trapped(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_datum_is_trapped() {
        let g = GridSpec::new(8, 4).unwrap();
        let p = SolverParams::new(2.0, None, 1e-2, 0.1);
        let r = small_data_trap_probe(&[SpectralField::zeros(g)], &p, 1.0, 2.0, 0).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.constant("sup_h1"), Some(0.0));
    }

    #[test]
    fn large_datum_is_config_error() {
        let g = GridSpec::new(8, 4).unwrap();
        let p = SolverParams::new(2.0, None, 1e-2, 0.1);
        let phi = random_band_with_h1(g, 1, 3, 3.0, 5.0);
        assert!(matches!(small_data_trap_probe(&[phi], &p, 1.0, 2.0, 0), Err(crate::Error::Config(_))));
    }
}
