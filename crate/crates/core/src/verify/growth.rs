//! `H^s` differential inequality `dY/dt <= C Y^{sigma+1}` for
//! `Y = ||u||_{H^s}^2`, and its closed-form envelope
//! `Y(t) <= (Y(0)^{-sigma} - c t)^{-1/sigma}` with `c = sigma C`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{ProbeReport, Verdict};
use super::timederiv::fd_derivative;
use crate::dynamics::{evolve, SolverParams, Termination, Trajectory};
use crate::error::{config, Result};
use crate::spectral::cutoff::CutoffSpec;
use crate::spectral::field::SpectralField;
use crate::spectral::grid::GridSpec;
use crate::spectral::random::{random_band_with_h1, DEFAULT_DECAY};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    /// `max_t |dY/dt| / Y^{sigma+1}`.
    pub rate_constant: f64,
    /// Envelope constant `c = sigma * rate_constant`.
    pub c: f64,
    /// Largest `Y(t) / envelope(t)` over records inside the envelope's lifespan.
    pub envelope_ratio: f64,
    /// Fraction of the final `L^2` mass in the top quarter of the modes.
    pub tail_fraction: f64,
}

/// Fit the inequality on one trajectory with `hs` recorded at order `s`.
pub fn fit_growth(traj: &Trajectory) -> Result<GrowthFit> {
    let sigma = traj.params.sigma;
    let y: Vec<f64> = traj.diagnostics.iter().map(|r| r.hs * r.hs).collect();
    let dy = fd_derivative(&y, traj.record_spacing())?;
    let rate_constant = y
        .iter()
        .zip(&dy)
        .filter(|(v, _)| **v > 0.0)
        .map(|(v, d)| d.abs() / v.powf(sigma + 1.0))
        .fold(0.0, f64::max);
    let c = sigma * rate_constant;
    let y0 = y[0];
    let envelope_ratio = if y0 == 0.0 {
        0.0
    } else {
        traj.times
            .iter()
            .zip(&y)
            .filter_map(|(t, v)| {
                let base = y0.powf(-sigma) - c * t;
                (base > 0.0).then(|| v / base.powf(-1.0 / sigma))
            })
            .fold(0.0, f64::max)
    };
    Ok(GrowthFit { rate_constant, c, envelope_ratio, tail_fraction: tail_fraction(traj.final_state()) })
}

fn tail_fraction(u: &SpectralField) -> f64 {
    let total = u.l2_norm_sqr();
    if total == 0.0 {
        return 0.0;
    }
    let edge = (3 * u.max_mode() / 4) as i64;
    u.modes().filter(|(n, _)| n.abs() > edge).map(|(_, c)| c.norm_sqr()).sum::<f64>() / total
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HsGrowthConfig {
    pub sigma: f64,
    pub s: f64,
    pub epsilons: Vec<f64>,
    pub max_mode: usize,
    pub oversample: usize,
    pub h1: f64,
    pub band: usize,
    pub seed: u64,
    pub dt: f64,
    pub t_end: f64,
    pub record_every: usize,
    /// Allowed `max c / min c - 1` across the cutoffs.
    pub variation_tol: f64,
    /// Largest top-quarter mass fraction still counted as resolved.
    pub tail_tol: f64,
}

impl Default for HsGrowthConfig {
    fn default() -> Self {
        Self {
            sigma: 2.0,
            s: 1.75,
            epsilons: vec![1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0],
            max_mode: 64,
            oversample: 4,
            h1: 1.0,
            band: 24,
            seed: 5,
            dt: 5e-4,
            t_end: 0.25,
            record_every: 5,
            variation_tol: 0.25,
            tail_tol: 1e-8,
        }
    }
}

/// Report over trajectories that share `sigma` and the `hs` order. Verdict:
/// inconclusive if any run stopped early or is under-resolved; otherwise pass
/// iff every envelope holds and `c` varies by less than `variation_tol`.
pub fn hs_growth_report(trajs: &[Trajectory], cfg: &HsGrowthConfig) -> Result<ProbeReport> {
    if trajs.is_empty() {
        return Err(config("hs growth needs at least one trajectory"));
    }
    let fits = trajs.iter().map(fit_growth).collect::<Result<Vec<_>>>()?;
    let cs: Vec<f64> = fits.iter().map(|f| f.c).collect();
    let c_max = cs.iter().copied().fold(0.0, f64::max);
    let c_min = cs.iter().copied().fold(f64::INFINITY, f64::min);
    let variation = if c_max == 0.0 { 0.0 } else { c_max / c_min - 1.0 };
    let envelope = fits.iter().map(|f| f.envelope_ratio).fold(0.0, f64::max);
    let tail = fits.iter().map(|f| f.tail_fraction).fold(0.0, f64::max);
    let stopped = trajs.iter().any(|t| t.termination != Termination::Completed);
    let verdict = if stopped || tail > cfg.tail_tol {
        Verdict::Inconclusive
    } else {
        Verdict::from_bool(c_max.is_finite() && envelope <= 1.0 + 1e-9 && variation < cfg.variation_tol)
    };
    let residuals: Vec<f64> = fits.iter().map(|f| f.rate_constant).collect();
    let mut rep = ProbeReport::new("hsgrowth", cfg.seed, &residuals, verdict, serde_json::to_value(cfg)?)
        .with_constant("c_max", c_max)
        .with_constant("c_min", c_min)
        .with_constant("c_variation", variation)
        .with_constant("envelope_ratio_max", envelope)
        .with_constant("tail_fraction_max", tail);
    for (i, f) in fits.iter().enumerate() {
        rep = rep.with_constant(&format!("c_{i}"), f.c);
    }
    Ok(rep)
}

/// Run the configured random datum once per cutoff and fit.
pub fn hs_growth_probe(cfg: &HsGrowthConfig) -> Result<ProbeReport> {
    let grid = GridSpec::new(cfg.max_mode, cfg.oversample)?;
    let phi = random_band_with_h1(grid, cfg.seed, cfg.band, DEFAULT_DECAY, cfg.h1);
    let trajs = cfg
        .epsilons
        .par_iter()
        .map(|&eps| {
            let mut p = SolverParams::new(cfg.sigma, Some(CutoffSpec::new(eps)?), cfg.dt, cfg.t_end)
                .with_record_every(cfg.record_every);
            p.hs_order = cfg.s;
            evolve(&phi, &p)
        })
        .collect::<Result<Vec<_>>>()?;
    hs_growth_report(&trajs, cfg)
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;

    #[test]
    fn plane_wave_has_zero_rate() {
        let g = GridSpec::new(16, 4).unwrap();
        let phi = SpectralField::plane_wave(g, 2, Complex64::new(0.5, 0.0)).unwrap();
        let p = SolverParams::new(2.0, None, 1e-3, 0.01);
        let traj = evolve(&phi, &p).unwrap();
        let f = fit_growth(&traj).unwrap();
        assert!(f.rate_constant < 1e-8, "{}", f.rate_constant);
        assert!(f.envelope_ratio <= 1.0 + 1e-9);
    }
}
