//! Randomized check of the cutoff operator's algebraic and norm properties:
//! idempotence, self-adjointness, L2 contraction, the `H^s` smoothing bound
//! and strong convergence to the identity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{ProbeReport, Verdict};
use crate::error::{config, Result};
use crate::spectral::cutoff::CutoffSpec;
use crate::spectral::field::SpectralField;
use crate::spectral::grid::GridSpec;
use crate::spectral::norms::sobolev_norm;
use crate::spectral::random::random_band_field;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffPropsConfig {
    pub max_mode: usize,
    pub samples: usize,
    pub seed: u64,
    /// Sobolev order of the smoothing and convergence checks.
    pub s: f64,
    pub adjoint_tol: f64,
}

impl Default for CutoffPropsConfig {
    fn default() -> Self {
        Self { max_mode: 64, samples: 1000, seed: 11, s: 2.0, adjoint_tol: 1e-12 }
    }
}

/// Failure counts per property over all samples.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct CutoffTally {
    pub idempotent: usize,
    pub self_adjoint: usize,
    pub contraction: usize,
    pub smoothing: usize,
    pub convergence: usize,
    pub max_adjoint_defect: f64,
    /// Largest `||J f||_{H^s} / (K^s ||f||)`; bounded by `(1 + K^{-2})^{s/2} <= 2^{s/2}`.
    pub max_smoothing_constant: f64,
}

impl CutoffTally {
    pub fn failures(&self) -> usize {
        self.idempotent + self.self_adjoint + self.contraction + self.smoothing + self.convergence
    }

    fn merge(mut self, o: Self) -> Self {
        self.idempotent += o.idempotent;
        self.self_adjoint += o.self_adjoint;
        self.contraction += o.contraction;
        self.smoothing += o.smoothing;
        self.convergence += o.convergence;
        self.max_adjoint_defect = self.max_adjoint_defect.max(o.max_adjoint_defect);
        self.max_smoothing_constant = self.max_smoothing_constant.max(o.max_smoothing_constant);
        self
    }
}

/// Check every property on one pair `(f, g)` with the cutoff `c`.
pub fn check_sample(f: &SpectralField, g: &SpectralField, c: &CutoffSpec, s: f64, adjoint_tol: f64) -> CutoffTally {
    let mut t = CutoffTally::default();
    let jf = c.apply(f);
    if c.apply(&jf) != jf {
        t.idempotent += 1;
    }
    let scale = (f.l2_norm() * g.l2_norm()).max(f64::MIN_POSITIVE);
    let defect = (jf.inner(g) - f.inner(&c.apply(g))).norm() / scale;
    t.max_adjoint_defect = defect;
    if defect > adjoint_tol {
        t.self_adjoint += 1;
    }
    if jf.l2_norm() > f.l2_norm() {
        t.contraction += 1;
    }
    let k = c.max_mode() as f64;
    let lhs = sobolev_norm(&jf, s);
    let rhs = (1.0 + k * k).powf(0.5 * s) * f.l2_norm();
    if lhs > rhs * (1.0 + 1e-12) {
        t.smoothing += 1;
    }
    if f.l2_norm() > 0.0 {
        let constant = lhs / (k.powf(s) * f.l2_norm());
        t.max_smoothing_constant = constant;
        // K <= 1/eps, so the bound in terms of eps^{-s} follows from this one.
        if constant > 2f64.powf(0.5 * s) * (1.0 + 1e-12) {
            t.smoothing += 1;
        }
    }
    t
}

/// `||J_eps f - f||_{H^s}` along `eps = 2^{-1}, ..., 2^{-j_max}`.
pub fn convergence_profile(f: &SpectralField, s: f64, j_max: u32) -> Result<Vec<f64>> {
    (1..=j_max).map(|j| Ok(sobolev_norm(&(&CutoffSpec::dyadic(j)?.apply(f) - f), s))).collect()
}

fn is_monotone_to_zero(profile: &[f64]) -> bool {
    profile.windows(2).all(|w| w[1] <= w[0]) && profile.last().is_some_and(|x| *x == 0.0)
}

pub fn cutoff_props_probe(cfg: &CutoffPropsConfig) -> Result<ProbeReport> {
    if cfg.samples == 0 || !cfg.max_mode.is_power_of_two() || cfg.max_mode < 4 {
        return Err(config("cutoff_props needs samples >= 1 and a power-of-two max_mode >= 4"));
    }
    let grid = GridSpec::new(cfg.max_mode, 2)?;
    let j_max = cfg.max_mode.trailing_zeros();
    let per_sample: Vec<(CutoffTally, f64)> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(i as u64));
            let band = rng.random_range(1..=cfg.max_mode);
            let decay = rng.random_range(0.0..4.0);
            let f = random_band_field(grid, rng.random(), band, decay);
            let g = random_band_field(grid, rng.random(), rng.random_range(1..=cfg.max_mode), decay);
            let eps = if i % 2 == 0 {
                0.5f64.powi(rng.random_range(1..=j_max as i32))
            } else {
                rng.random_range(1.0 / cfg.max_mode as f64..1.0)
            };
            let c = CutoffSpec::new(eps)?;
            let mut t = check_sample(&f, &g, &c, cfg.s, cfg.adjoint_tol);
            let profile = convergence_profile(&f, cfg.s, j_max)?;
            if !is_monotone_to_zero(&profile) {
                t.convergence += 1;
            }
            Ok((t, t.max_adjoint_defect))
        })
        .collect::<Result<_>>()?;
    let tally = per_sample.iter().fold(CutoffTally::default(), |a, p| a.merge(p.0));
    let defects: Vec<f64> = per_sample.iter().map(|p| p.1).collect();
    let rep = ProbeReport::new("cutoff_props", cfg.seed, &defects, Verdict::from_bool(tally.failures() == 0), serde_json::to_value(cfg)?)
        .with_constant("failures_idempotent", tally.idempotent as f64)
        .with_constant("failures_self_adjoint", tally.self_adjoint as f64)
        .with_constant("failures_contraction", tally.contraction as f64)
        .with_constant("failures_smoothing", tally.smoothing as f64)
        .with_constant("failures_convergence", tally.convergence as f64)
        .with_constant("max_adjoint_defect", tally.max_adjoint_defect)
        .with_constant("max_smoothing_constant", tally.max_smoothing_constant);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_reaches_zero_once_band_is_covered() {
        let g = GridSpec::new(32, 2).unwrap();
        let f = random_band_field(g, 1, 5, 1.0);
        let p = convergence_profile(&f, 2.0, 5).unwrap();
        assert!(is_monotone_to_zero(&p));
        assert!(p[0] > 0.0);
        assert_eq!(p[2], 0.0);
    }

    #[test]
    fn small_suite_passes() {
        let cfg = CutoffPropsConfig { samples: 50, ..Default::default() };
        let r = cutoff_props_probe(&cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{:?}", r.estimated_constants);
    }
}
