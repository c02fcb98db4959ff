//! Least-squares identification of the bad-term content of `dE_{alpha,beta}/dt`.
//!
//! Across a family of concentrated data, `dE/dt` is regressed on
//! `(B_1, B_2, 1 + ||u||_{H^2}^2)`. The fitted `B_1` and `B_2` coefficients
//! should be `2 alpha - 4` and `2 alpha - beta (sigma + 1) - 2`, vanishing
//! only at `alpha = 2`, `beta = 2 / (sigma + 1)`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::families::{BumpSpec, FamilySpec};
use super::lemmas::{evaluate_family, IdentityProbeConfig, IdentitySample, InstantDerivatives};
use super::report::{ProbeReport, Verdict};
use crate::error::{Error, Result};
use crate::functionals::{canonical_beta, DEFAULT_DELTA_REG};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CancellationConfig {
    pub sigma: f64,
    pub delta_reg: f64,
    pub max_mode: usize,
    pub oversample: usize,
    pub family: FamilySpec,
    pub samples: usize,
    pub kappa_lo: f64,
    pub octaves: f64,
    pub seed: u64,
    /// The `(alpha, beta)` under test.
    pub alpha: f64,
    pub beta: f64,
    pub alpha_grid: Vec<f64>,
    pub beta_grid: Vec<f64>,
    /// A fitted coefficient "vanishes" when its magnitude is at most this.
    pub tolerance: f64,
    pub max_condition: f64,
}

impl CancellationConfig {
    pub fn canonical(sigma: f64) -> Self {
        Self {
            sigma,
            delta_reg: DEFAULT_DELTA_REG,
            max_mode: 512,
            oversample: 4,
            family: FamilySpec::default(),
            samples: 24,
            kappa_lo: 80.0,
            octaves: 2.0,
            seed: 2024,
            alpha: 2.0,
            beta: canonical_beta(sigma),
            alpha_grid: (0..=12).map(|i| i as f64 * 0.25).collect(),
            beta_grid: (0..=12).map(|i| i as f64 * 0.125).collect(),
            tolerance: 0.2,
            max_condition: 1e8,
        }
    }

    pub fn with_weights(mut self, alpha: f64, beta: f64) -> Self {
        self.alpha = alpha;
        self.beta = beta;
        self
    }

    fn identity_config(&self) -> IdentityProbeConfig {
        IdentityProbeConfig {
            sigma: self.sigma,
            delta_reg: self.delta_reg,
            max_mode: self.max_mode,
            oversample: self.oversample,
            family: self.family,
            ..IdentityProbeConfig::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitPoint {
    pub alpha: f64,
    pub beta: f64,
    pub b1_coef: f64,
    pub b2_coef: f64,
    pub good_coef: f64,
    pub vanishes: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CancellationScan {
    pub configured: FitPoint,
    pub canonical: FitPoint,
    pub origin: FitPoint,
    pub grid: Vec<FitPoint>,
    pub condition: f64,
    /// Fitted coefficients of `(dS/dt, dC_1/dt, dC_2/dt + dC_3/dt / 2)` on the regressors.
    pub basis: [[f64; 3]; 3],
    pub report: ProbeReport,
}

/// Weighted least squares on rows `x_i`, targets `y_i`, each row scaled by
/// `1 / w_i`. Returns coefficients and the condition number of the scaled design.
pub fn weighted_lstsq(x: &[[f64; 3]], y: &[f64], w: &[f64]) -> Result<([f64; 3], f64)> {
    let n = x.len();
    if n < 3 || y.len() != n || w.len() != n {
        return Err(Error::Input("least squares needs at least 3 consistent rows".into()));
    }
    let a = DMatrix::from_fn(n, 3, |i, j| x[i][j] / w[i]);
    let b = DVector::from_fn(n, |i, _| y[i] / w[i]);
    let svd = a.svd(true, true);
    let sv = &svd.singular_values;
    let smax = sv.max();
    let smin = sv.min();
    let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    let sol = svd.solve(&b, smax * 1e-14).map_err(|e| Error::Input(e.to_string()))?;
    Ok(([sol[0], sol[1], sol[2]], cond))
}

fn regressors(d: &InstantDerivatives) -> ([f64; 3], f64) {
    let x = [d.bad[0], d.bad[1], 1.0 + d.h2_sqr];
    let w = x[0].abs() + x[1].abs() + x[2];
    (x, w)
}

/// Fit from already evaluated samples.
pub fn scan_from_samples(cfg: &CancellationConfig, samples: &[IdentitySample]) -> Result<CancellationScan> {
    let rows: Vec<([f64; 3], f64)> = samples.iter().map(|s| regressors(&s.at_h)).collect();
    let x: Vec<[f64; 3]> = rows.iter().map(|r| r.0).collect();
    let w: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let targets = |s: &IdentitySample| -> [f64; 3] {
        let d = s.at_h.rates;
        [d[0], d[1], d[2] + 0.5 * d[3]]
    };
    let mut basis = [[0.0; 3]; 3];
    let mut cond = 0.0;
    for (k, b) in basis.iter_mut().enumerate() {
        let y: Vec<f64> = samples.iter().map(|s| targets(s)[k]).collect();
        let (c, kappa) = weighted_lstsq(&x, &y, &w)?;
        *b = c;
        cond = kappa;
    }
    let fit = |alpha: f64, beta: f64| -> FitPoint {
        let c: Vec<f64> = (0..3).map(|j| basis[0][j] - alpha * basis[1][j] - beta * basis[2][j]).collect();
        FitPoint {
            alpha,
            beta,
            b1_coef: c[0],
            b2_coef: c[1],
            good_coef: c[2],
            vanishes: c[0].abs() <= cfg.tolerance && c[1].abs() <= cfg.tolerance,
        }
    };
    let configured = fit(cfg.alpha, cfg.beta);
    let canonical = fit(2.0, canonical_beta(cfg.sigma));
    let origin = fit(0.0, 0.0);
    let grid: Vec<FitPoint> =
        cfg.alpha_grid.iter().flat_map(|&a| cfg.beta_grid.iter().map(move |&b| (a, b))).map(|(a, b)| fit(a, b)).collect();

    // Weighted fit residuals at the configured point.
    let residuals: Vec<f64> = samples
        .iter()
        .zip(&rows)
        .map(|(s, (xr, wr))| {
            let t = targets(s);
            let y = t[0] - cfg.alpha * t[1] - cfg.beta * t[2];
            let pred = configured.b1_coef * xr[0] + configured.b2_coef * xr[1] + configured.good_coef * xr[2];
            (y - pred) / wr
        })
        .collect();
    let verdict = if !(cond < cfg.max_condition) {
        Verdict::Inconclusive
    } else {
        Verdict::from_bool(configured.vanishes && !origin.vanishes)
    };
    let vanishing = grid.iter().filter(|p| p.vanishes).count();
    let report = ProbeReport::new("cancellation", cfg.seed, &residuals, verdict, serde_json::to_value(cfg).unwrap_or_default())
        .with_constant("b1_coef", configured.b1_coef)
        .with_constant("b2_coef", configured.b2_coef)
        .with_constant("good_coef", configured.good_coef)
        .with_constant("b1_coef_canonical", canonical.b1_coef)
        .with_constant("b2_coef_canonical", canonical.b2_coef)
        .with_constant("b1_coef_origin", origin.b1_coef)
        .with_constant("b2_coef_origin", origin.b2_coef)
        .with_constant("condition_number", cond)
        .with_constant("vanishing_grid_points", vanishing as f64);
    Ok(CancellationScan { configured, canonical, origin, grid, condition: cond, basis, report })
}

/// The scan family: `samples` bumps over `octaves` octaves of concentration.
pub fn scan_family(cfg: &CancellationConfig) -> Vec<BumpSpec> {
    cfg.family.random_scan(cfg.samples, cfg.kappa_lo, cfg.octaves, cfg.seed)
}

pub fn cancellation_scan(cfg: &CancellationConfig) -> Result<CancellationScan> {
    let bumps: Vec<(usize, BumpSpec)> = scan_family(cfg).into_iter().map(|b| (0, b)).collect();
    let samples = evaluate_family(&cfg.identity_config(), &bumps)?;
    scan_from_samples(cfg, &samples)
}
