//! Residual probes for the time-derivative identities of `||u_xx||^2` and of
//! the correction integrals `C_1, C_2, C_3`, and for the modified energy.
//!
//! Each identity has the form `dF/dt = (bad-term combination) + G` with `G`
//! a good term, `|G| <= C(M) (1 + ||u||_{H^2}^2)` while `||u||_{H^1} <= M`.
//! The probe measures `R = dF/dt - (bad-term combination)` by finite
//! differences along the flow and checks the good-term scaling: across a
//! fixed-`H^1` family whose `H^2` grows by at least 16x per level, the
//! normalized residual `R / (1 + ||u||_{H^2}^2)` must grow by less than 2x.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::families::{BumpSpec, FamilySpec};
use super::report::{ProbeReport, Verdict};
use super::timederiv::{centred_trajectory, fd_derivative};
use crate::dynamics::SolverParams;
use crate::error::{Error, Result};
use crate::functionals::{h2_seminorm_sqr, FieldSamples, ModifiedEnergyParams, DEFAULT_DELTA_REG};
use crate::spectral::cutoff::CutoffSpec;
use crate::spectral::field::SpectralField;
use crate::spectral::grid::GridSpec;
use crate::spectral::norms::sobolev_norm;

/// The tracked identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    /// `d/dt ||u_xx||^2 = -4 B_1 - 2 B_2 + G_0`.
    H2Seminorm,
    /// `d/dt C_1 = -2 B_1 - 2 B_2 + G_1`.
    Correction1,
    /// `d/dt C_2 = (sigma + 1) B_2 + 3 B_3 + G_2`.
    Correction2,
    /// `d/dt C_3 = -6 B_3 + G_3`.
    Correction3,
    /// `d/dt E_{2, 2/(sigma+1)} = G`.
    ModifiedEnergy,
}

impl Identity {
    pub fn probe_id(&self) -> &'static str {
        match self {
            Identity::H2Seminorm => "lemma26",
            Identity::Correction1 => "lemma27",
            Identity::Correction2 => "lemma28",
            Identity::Correction3 => "lemma29",
            Identity::ModifiedEnergy => "modenergy",
        }
    }

    pub fn from_probe_id(id: &str) -> Option<Self> {
        Some(match id {
            "lemma26" => Identity::H2Seminorm,
            "lemma27" => Identity::Correction1,
            "lemma28" => Identity::Correction2,
            "lemma29" => Identity::Correction3,
            "modenergy" => Identity::ModifiedEnergy,
            _ => return None,
        })
    }

    /// Bad-term combination claimed for `dF/dt`.
    pub fn claimed(&self, b: [f64; 3], sigma: f64) -> f64 {
        match self {
            Identity::H2Seminorm => -4.0 * b[0] - 2.0 * b[1],
            Identity::Correction1 => -2.0 * b[0] - 2.0 * b[1],
            Identity::Correction2 => (sigma + 1.0) * b[1] + 3.0 * b[2],
            Identity::Correction3 => -6.0 * b[2],
            Identity::ModifiedEnergy => 0.0,
        }
    }

    /// `dF/dt` from the time derivatives of `(S, C_1, C_2, C_3)`.
    pub fn derivative(&self, d: &[f64; 4], sigma: f64) -> f64 {
        match self {
            Identity::H2Seminorm => d[0],
            Identity::Correction1 => d[1],
            Identity::Correction2 => d[2],
            Identity::Correction3 => d[3],
            Identity::ModifiedEnergy => {
                let w = ModifiedEnergyParams::canonical(sigma).weights();
                d[0] + w[0] * d[1] + w[1] * d[2] + w[2] * d[3]
            }
        }
    }
}

/// Values and time derivatives of `S = ||u_xx||^2` and the corrections, with
/// the bad and good terms, at one instant of the flow.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InstantDerivatives {
    /// `(S, C_1, C_2, C_3)`.
    pub values: [f64; 4],
    /// Their time derivatives.
    pub rates: [f64; 4],
    /// `(B_1, B_2, B_3)` of `J_eps u`.
    pub bad: [f64; 3],
    /// `(I_0, I_1, I_2)`.
    pub good: [f64; 3],
    /// `||u||_{H^2}^2`.
    pub h2_sqr: f64,
    pub h1: f64,
}

/// Default finite-difference spacing for a field concentrated at scale `kappa`:
/// a small fraction of the dispersive time `1 / (2 pi kappa)^2`.
pub fn default_spacing(bandwidth: f64) -> f64 {
    1e-3 / (4.0 * PI * PI * bandwidth * bandwidth)
}

/// Evaluate [`InstantDerivatives`] at `u` for the flow with cutoff `cutoff`.
pub fn instant_derivatives(
    u: &SpectralField,
    sigma: f64,
    delta_reg: f64,
    cutoff: Option<CutoffSpec>,
    h: f64,
) -> Result<InstantDerivatives> {
    let mut params = SolverParams::new(sigma, cutoff, h, 4.0 * h);
    params.delta_reg = delta_reg;
    let traj = centred_trajectory(u, &params, h)?;
    let rows: Vec<[f64; 4]> = traj
        .states
        .iter()
        .map(|w| {
            let v = crate::spectral::cutoff::apply_optional(w, cutoff.as_ref());
            let s = FieldSamples::new(&v);
            [h2_seminorm_sqr(w), s.correction_c1(sigma), s.correction_c2(sigma), s.correction_c3(sigma, delta_reg)]
        })
        .collect();
    let mut rates = [0.0; 4];
    for (k, r) in rates.iter_mut().enumerate() {
        let series: Vec<f64> = rows.iter().map(|row| row[k]).collect();
        *r = fd_derivative(&series, h)?[2];
    }
    let centre = &traj.states[2];
    let v = crate::spectral::cutoff::apply_optional(centre, cutoff.as_ref());
    let s = FieldSamples::new(&v);
    Ok(InstantDerivatives {
        values: rows[2],
        rates,
        bad: [s.b1(sigma), s.b2(sigma), s.b3(sigma, delta_reg)],
        good: [s.good_ik(sigma, 0, delta_reg), s.good_ik(sigma, 1, delta_reg), s.good_ik(sigma, 2, delta_reg)],
        h2_sqr: sobolev_norm(centre, 2.0).powi(2),
        h1: sobolev_norm(centre, 1.0),
    })
}

impl InstantDerivatives {
    pub fn residual(&self, id: Identity, sigma: f64) -> f64 {
        id.derivative(&self.rates, sigma) - id.claimed(self.bad, sigma)
    }

    pub fn normalized_residual(&self, id: Identity, sigma: f64) -> f64 {
        self.residual(id, sigma) / (1.0 + self.h2_sqr)
    }

    /// Exact good term of the `||u_xx||^2` identity,
    /// `G_0 = -2 sigma (sigma - 1) (I_0 + I_2) - 4 sigma^2 I_1`.
    pub fn g0(&self, sigma: f64) -> f64 {
        -2.0 * sigma * (sigma - 1.0) * (self.good[0] + self.good[2]) - 4.0 * sigma * sigma * self.good[1]
    }
}

/// Settings shared by the identity probes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdentityProbeConfig {
    pub sigma: f64,
    pub delta_reg: f64,
    pub max_mode: usize,
    pub oversample: usize,
    pub family: FamilySpec,
    /// Number of concentration levels; `kappa` grows by `level_ratio` per level.
    pub levels: usize,
    pub level_ratio: f64,
    /// Largest allowed growth of the normalized residual per level.
    pub growth_limit: f64,
    /// Largest allowed relative change of a residual when the finite-difference
    /// spacing is halved.
    pub stability_tol: f64,
}

impl Default for IdentityProbeConfig {
    fn default() -> Self {
        Self {
            sigma: 2.0,
            delta_reg: DEFAULT_DELTA_REG,
            max_mode: 640,
            oversample: 4,
            family: FamilySpec::default(),
            levels: 3,
            level_ratio: 5.0,
            growth_limit: 2.0,
            stability_tol: 0.1,
        }
    }
}

impl IdentityProbeConfig {
    pub fn grid(&self) -> Result<GridSpec> {
        GridSpec::new(self.max_mode, self.oversample)
    }

    /// The flow is the cut-off equation with `K = max_mode`.
    pub fn cutoff(&self) -> Result<CutoffSpec> {
        CutoffSpec::from_max_mode(self.max_mode)
    }
}

/// One family member evaluated at spacing `h` and `h/2`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdentitySample {
    pub bump: BumpSpec,
    pub level: usize,
    pub at_h: InstantDerivatives,
    pub at_half_h: InstantDerivatives,
}

pub fn evaluate_family(cfg: &IdentityProbeConfig, bumps: &[(usize, BumpSpec)]) -> Result<Vec<IdentitySample>> {
    let grid = cfg.grid()?;
    let cutoff = cfg.cutoff()?;
    for (_, b) in bumps {
        if b.bandwidth() > cfg.max_mode as f64 {
            return Err(Error::Config(format!(
                "bump with kappa = {} needs about {:.0} modes, grid has {}",
                b.kappa,
                b.bandwidth(),
                cfg.max_mode
            )));
        }
    }
    bumps
        .par_iter()
        .map(|&(level, bump)| {
            let u = bump.field(grid)?;
            let h = default_spacing(bump.bandwidth().max(1.0));
            Ok(IdentitySample {
                bump,
                level,
                at_h: instant_derivatives(&u, cfg.sigma, cfg.delta_reg, Some(cutoff), h)?,
                at_half_h: instant_derivatives(&u, cfg.sigma, cfg.delta_reg, Some(cutoff), 0.5 * h)?,
            })
        })
        .collect()
}

/// Relative change of the residual under halving the spacing, measured
/// against the residual itself or, if that is smaller, against the
/// finite-difference noise floor `1e-8 |dF/dt|`.
fn spacing_change(s: &IdentitySample, id: Identity, sigma: f64) -> f64 {
    let a = s.at_h.residual(id, sigma);
    let b = s.at_half_h.residual(id, sigma);
    let floor = 1e-8 * id.derivative(&s.at_h.rates, sigma).abs();
    (a - b).abs() / a.abs().max(floor).max(f64::MIN_POSITIVE)
}

/// Residual probe for one identity over the standard scaling family.
pub fn identity_probe(id: Identity, cfg: &IdentityProbeConfig) -> Result<ProbeReport> {
    let levels = cfg.family.scaling_levels(cfg.levels, cfg.level_ratio);
    let bumps: Vec<(usize, BumpSpec)> =
        levels.iter().enumerate().flat_map(|(j, l)| l.iter().map(move |b| (j, *b))).collect();
    let samples = evaluate_family(cfg, &bumps)?;
    Ok(identity_report(id, cfg, &samples))
}

/// Assemble the report for `id` from evaluated samples.
pub fn identity_report(id: Identity, cfg: &IdentityProbeConfig, samples: &[IdentitySample]) -> ProbeReport {
    let sigma = cfg.sigma;
    let normalized: Vec<f64> = samples.iter().map(|s| s.at_h.normalized_residual(id, sigma)).collect();
    let nlev = samples.iter().map(|s| s.level + 1).max().unwrap_or(0);
    let level_max = |f: &dyn Fn(&IdentitySample) -> f64| -> Vec<f64> {
        (0..nlev)
            .map(|j| samples.iter().filter(|s| s.level == j).map(|s| f(s).abs()).fold(0.0, f64::max))
            .collect()
    };
    let norm_max = level_max(&|s| s.at_h.normalized_residual(id, sigma));
    let raw_rate = level_max(&|s| id.derivative(&s.at_h.rates, sigma));
    let bad_max = level_max(&|s| id.claimed(s.at_h.bad, sigma));
    let h2_max = level_max(&|s| s.at_h.h2_sqr);
    let h1_max = samples.iter().map(|s| s.at_h.h1).fold(0.0, f64::max);
    let growth: Vec<f64> = norm_max.windows(2).map(|w| w[1] / w[0]).collect();
    let h2_growth: Vec<f64> = h2_max.windows(2).map(|w| w[1] / w[0]).collect();
    let stability = samples.iter().map(|s| spacing_change(s, id, sigma)).fold(0.0, f64::max);

    let bounded = growth.iter().all(|g| *g < cfg.growth_limit);
    let separated = h2_growth.iter().all(|g| *g >= 16.0);
    let verdict = if stability > cfg.stability_tol {
        Verdict::Inconclusive
    } else {
        Verdict::from_bool(bounded && separated)
    };
    let mut r = ProbeReport::new(
        id.probe_id(),
        0,
        &normalized,
        verdict,
        serde_json::to_value(cfg).unwrap_or_default(),
    )
    .with_constant("good_term_constant", norm_max.iter().copied().fold(0.0, f64::max))
    .with_constant("h1_ceiling", h1_max)
    .with_constant("spacing_change_max", stability);
    for (j, g) in growth.iter().enumerate() {
        r = r.with_constant(&format!("normalized_growth_{j}"), *g);
    }
    for (j, g) in h2_growth.iter().enumerate() {
        r = r.with_constant(&format!("h2_growth_{j}"), *g);
    }
    for j in 0..nlev.saturating_sub(1) {
        r = r.with_constant(&format!("raw_rate_growth_{j}"), raw_rate[j + 1] / raw_rate[j]);
        if bad_max[j] > 0.0 {
            r = r.with_constant(&format!("bad_term_growth_{j}"), bad_max[j + 1] / bad_max[j]);
        }
    }
    r
}

/// Growth of `max |d/dt ||u_xx||^2|` per level for the same samples; the raw
/// rate must outgrow the normalized residual for the scaling test to mean anything.
pub fn raw_h2_rate_growth(samples: &[IdentitySample]) -> Vec<f64> {
    let nlev = samples.iter().map(|s| s.level + 1).max().unwrap_or(0);
    let m: Vec<f64> = (0..nlev)
        .map(|j| samples.iter().filter(|s| s.level == j).map(|s| s.at_h.rates[0].abs()).fold(0.0, f64::max))
        .collect();
    m.windows(2).map(|w| w[1] / w[0]).collect()
}

/// Sensitivity of the `C_3` identity to the regularization of `|v|^{2(sigma-2)}`
/// near `sigma = 1`: residuals and `B_3` at two values of `delta`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeltaSensitivity {
    pub sigma: f64,
    pub deltas: [f64; 2],
    pub b3: [f64; 2],
    pub residual: [f64; 2],
    pub rate: [f64; 2],
    /// `|B_3(delta_1) - B_3(delta_2)| / |B_3(delta_1)|`.
    pub b3_relative_change: f64,
    /// `|R(delta_1) - R(delta_2)| / max(|dC_3/dt|, tiny)`.
    pub residual_relative_change: f64,
}

pub fn delta_sensitivity(sigma: f64, deltas: [f64; 2], bump: &BumpSpec, max_mode: usize) -> Result<DeltaSensitivity> {
    let grid = GridSpec::new(max_mode, 4)?;
    let cutoff = CutoffSpec::from_max_mode(max_mode)?;
    let u = bump.field(grid)?;
    let h = default_spacing(bump.bandwidth().max(1.0));
    let a = instant_derivatives(&u, sigma, deltas[0], Some(cutoff), h)?;
    let b = instant_derivatives(&u, sigma, deltas[1], Some(cutoff), h)?;
    let id = Identity::Correction3;
    let ra = a.residual(id, sigma);
    let rb = b.residual(id, sigma);
    Ok(DeltaSensitivity {
        sigma,
        deltas,
        b3: [a.bad[2], b.bad[2]],
        residual: [ra, rb],
        rate: [a.rates[3], b.rates[3]],
        b3_relative_change: (a.bad[2] - b.bad[2]).abs() / a.bad[2].abs().max(f64::MIN_POSITIVE),
        residual_relative_change: (ra - rb).abs() / a.rates[3].abs().max(f64::MIN_POSITIVE),
    })
}

/// Residual `dF/dt - (bad-term combination)` at every record of a
/// trajectory of the cut-off flow, with `dF/dt` from finite differences.
pub fn trajectory_residuals(traj: &crate::dynamics::Trajectory, id: Identity) -> Result<Vec<f64>> {
    let p = &traj.params;
    let sigma = p.sigma;
    let mut rows = Vec::with_capacity(traj.len());
    let mut bad = Vec::with_capacity(traj.len());
    for w in &traj.states {
        let v = crate::spectral::cutoff::apply_optional(w, p.cutoff.as_ref());
        let s = FieldSamples::new(&v);
        rows.push([h2_seminorm_sqr(w), s.correction_c1(sigma), s.correction_c2(sigma), s.correction_c3(sigma, p.delta_reg)]);
        bad.push([s.b1(sigma), s.b2(sigma), s.b3(sigma, p.delta_reg)]);
    }
    let h = traj.record_spacing();
    let mut rates = vec![[0.0; 4]; rows.len()];
    for k in 0..4 {
        let series: Vec<f64> = rows.iter().map(|r| r[k]).collect();
        for (i, d) in fd_derivative(&series, h)?.into_iter().enumerate() {
            rates[i][k] = d;
        }
    }
    Ok(rates.iter().zip(&bad).map(|(d, b)| id.derivative(d, sigma) - id.claimed(*b, sigma)).collect())
}
