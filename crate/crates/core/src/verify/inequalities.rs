//! Sampling probes for the fractional-calculus inequalities: the commutator
//! estimate, the fractional chain rule, the Gagliardo/Fourier seminorm
//! equivalence, and the `I_k` good-term bound.
//!
//! None of these assert a universal constant. Each computes a per-sample
//! ratio LHS / RHS over seeded random fields, at `N` and at `2N` modes, and
//! passes when the ratios are finite and the extreme ratio grows by less than
//! `stability_tol` under the resolution doubling. A decrease is not held
//! against the bound.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{ProbeReport, Verdict};
use crate::error::{domain, Result};
use crate::functionals::{check_sigma, FieldSamples};
use crate::spectral::fft::{grid_fractional, mean_sq, sup_norm};
use crate::spectral::field::{to_physical, SpectralField};
use crate::spectral::grid::GridSpec;
use crate::spectral::norms::{default_y_min, gagliardo_seminorm, homogeneous_seminorm, sobolev_norm};
use crate::spectral::random::random_band_field;

const DECAYS: [f64; 3] = [3.0, 3.5, 4.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingConfig {
    /// Modes of the coarse grid; the fine grid has twice as many.
    pub max_mode: usize,
    pub oversample: usize,
    pub samples: usize,
    pub seed: u64,
    /// Fields occupy `|n| <= max_mode / band_divisor`.
    pub band_divisor: usize,
    pub stability_tol: f64,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        Self { max_mode: 64, oversample: 4, samples: 1000, seed: 7, band_divisor: 4, stability_tol: 0.1 }
    }
}

impl SamplingConfig {
    fn grids(&self) -> Result<[GridSpec; 2]> {
        Ok([GridSpec::new(self.max_mode, self.oversample)?, GridSpec::new(2 * self.max_mode, self.oversample)?])
    }

    /// Sample `i` on `grid`. Draws are prefix-stable in the band, so the fine
    /// grid sees the coarse field plus its continuation to higher modes.
    pub fn field(&self, grid: GridSpec, stream: u64, i: usize) -> SpectralField {
        let seed = self.seed.wrapping_mul(0x9E37_79B9).wrapping_add(stream << 32).wrapping_add(i as u64);
        let band = (grid.max_mode() / self.band_divisor.max(1)).max(1);
        random_band_field(grid, seed, band, DECAYS[i % DECAYS.len()])
    }
}

/// `||D^s(uv) - u D^s v||_{L^2} / (||u||_{H^s} ||v||_{H^gamma} + ||u||_{H^{gamma+1}} ||v||_{H^{s-1}})`.
///
/// Products are formed on the oversampled grid, which holds them without
/// aliasing, and `D^s` acts on every DFT bin.
pub fn commutator_ratio(u: &SpectralField, v: &SpectralField, s: f64, gamma: f64) -> Result<f64> {
    check_commutator(s, gamma)?;
    let (pu, pv) = (to_physical(u), to_physical(v));
    let uv: Vec<Complex64> = pu.iter().zip(&pv).map(|(a, b)| a * b).collect();
    let dsv = to_physical(&crate::spectral::field::fractional_derivative(v, s)?);
    let lhs_s = grid_fractional(&uv, s);
    let comm: Vec<Complex64> = lhs_s.iter().zip(pu.iter().zip(&dsv)).map(|(a, (b, c))| a - b * c).collect();
    let lhs = mean_sq(&comm).sqrt();
    let rhs = sobolev_norm(u, s) * sobolev_norm(v, gamma) + sobolev_norm(u, gamma + 1.0) * sobolev_norm(v, s - 1.0);
    Ok(if lhs == 0.0 { 0.0 } else { lhs / rhs })
}

fn check_commutator(s: f64, gamma: f64) -> Result<()> {
    if !(s > 1.0 && gamma > 0.5 && s.is_finite() && gamma.is_finite()) {
        return Err(domain(format!("commutator estimate needs s > 1 and gamma > 1/2, got s = {s}, gamma = {gamma}")));
    }
    Ok(())
}

/// `||D^s |u|^{2 sigma}||_{L^2}` over
/// `||u||_inf^{2(sigma-1)} ||u_x||_inf ||D^{s-1} u|| + ||u||_inf^{2 sigma - 1} ||D^s u||`,
/// with sup norms taken as maxima over the oversampled grid.
pub fn chain_rule_ratio(u: &SpectralField, s: f64, sigma: f64) -> Result<f64> {
    check_chain(s, sigma)?;
    let su = FieldSamples::new(u);
    let p: Vec<Complex64> = su.rho.iter().map(|r| Complex64::new(r.powf(sigma), 0.0)).collect();
    let lhs = mean_sq(&grid_fractional(&p, s)).sqrt();
    let linf = sup_norm(&su.v);
    let dinf = sup_norm(&su.dv);
    let rhs = linf.powf(2.0 * (sigma - 1.0)) * dinf * homogeneous_seminorm(u, s - 1.0)
        + linf.powf(2.0 * sigma - 1.0) * homogeneous_seminorm(u, s);
    if rhs == 0.0 {
        return Ok(0.0);
    }
    Ok(lhs / rhs)
}

fn check_chain(s: f64, sigma: f64) -> Result<()> {
    check_sigma(sigma)?;
    if !(s > 1.5 && s < 2.0) {
        return Err(domain(format!("chain rule needs s in (3/2, 2), got {s}")));
    }
    Ok(())
}

/// Gagliardo seminorm over the Fourier seminorm `||D^gamma f||`, with the
/// singular region cut at one physical grid spacing.
pub fn gagliardo_ratio(f: &SpectralField, gamma: f64) -> Result<f64> {
    let g = gagliardo_seminorm(f, gamma, default_y_min(f))?;
    let h = homogeneous_seminorm(f, gamma);
    if h == 0.0 {
        return Err(domain("Fourier seminorm vanishes (constant field)"));
    }
    Ok(g / h)
}

/// Largest of `|I_k(u)| / (||u||_{H^2}^2 ||u||_{H^1}^{2 sigma})` over `k = 0, 1, 2`,
/// together with the largest excess of `|I_k|` over its pointwise majorant
/// (non-positive when the majorant holds).
pub fn good_term_ratio(u: &SpectralField, sigma: f64, delta_reg: f64) -> Result<(f64, f64)> {
    check_sigma(sigma)?;
    let su = FieldSamples::new(u);
    let bound = su.good_bound(sigma);
    let scale = sobolev_norm(u, 2.0).powi(2) * sobolev_norm(u, 1.0).powf(2.0 * sigma);
    let mut ratio: f64 = 0.0;
    let mut excess = f64::NEG_INFINITY;
    for k in 0..=2 {
        let ik = su.good_ik(sigma, k, delta_reg).abs();
        excess = excess.max(ik - bound * (1.0 + 1e-12));
        if scale > 0.0 {
            ratio = ratio.max(ik / scale);
        }
    }
    Ok((ratio, excess))
}

struct Resolution {
    coarse: Vec<f64>,
    fine: Vec<f64>,
}

fn at_both_resolutions<F>(cfg: &SamplingConfig, ratio: F) -> Result<Resolution>
where
    F: Fn(GridSpec, usize) -> Result<f64> + Sync,
{
    if cfg.samples == 0 {
        return Err(crate::error::config("at least one sample is required"));
    }
    let [g1, g2] = cfg.grids()?;
    let run = |g: GridSpec| (0..cfg.samples).into_par_iter().map(|i| ratio(g, i)).collect::<Result<Vec<f64>>>();
    Ok(Resolution { coarse: run(g1)?, fine: run(g2)? })
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn min_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Relative growth from `a` to `b`; negative when `b < a`.
fn growth(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        b / a - 1.0
    }
}

/// Report on the upper ratio (and optionally the lower one) of a two-resolution sample.
fn stability_report(id: &str, cfg: &SamplingConfig, r: &Resolution, lower: bool, config: serde_json::Value) -> ProbeReport {
    let (hi1, hi2) = (max_of(&r.coarse), max_of(&r.fine));
    let (lo1, lo2) = (min_of(&r.coarse), min_of(&r.fine));
    let finite = r.coarse.iter().chain(&r.fine).all(|x| x.is_finite());
    let upper_change = growth(hi1, hi2);
    // The lower bracket end fails by shrinking.
    let lower_change = growth(lo2, lo1);
    let mut ok = finite && upper_change < cfg.stability_tol;
    if lower {
        ok &= lower_change < cfg.stability_tol && lo2 > 0.0;
    }
    let mut rep = ProbeReport::new(id, cfg.seed, &r.fine, Verdict::from_bool(ok), config)
        .with_constant("max_ratio_coarse", hi1)
        .with_constant("max_ratio_fine", hi2)
        .with_constant("max_ratio_growth", upper_change);
    if lower {
        rep = rep
            .with_constant("min_ratio_coarse", lo1)
            .with_constant("min_ratio_fine", lo2)
            .with_constant("min_ratio_shrink", lower_change);
    }
    rep
}

fn echo<T: Serialize>(cfg: &SamplingConfig, extra: T) -> serde_json::Value {
    serde_json::json!({ "sampling": cfg, "params": extra })
}

pub fn commutator_probe(cfg: &SamplingConfig, s: f64, gamma: f64) -> Result<ProbeReport> {
    check_commutator(s, gamma)?;
    let r = at_both_resolutions(cfg, |g, i| commutator_ratio(&cfg.field(g, 0, i), &cfg.field(g, 1, i), s, gamma))?;
    Ok(stability_report("commutator", cfg, &r, false, echo(cfg, serde_json::json!({ "s": s, "gamma": gamma }))))
}

pub fn chain_rule_probe(cfg: &SamplingConfig, s: f64, sigma: f64) -> Result<ProbeReport> {
    check_chain(s, sigma)?;
    let r = at_both_resolutions(cfg, |g, i| chain_rule_ratio(&cfg.field(g, 2, i), s, sigma))?;
    Ok(stability_report("chainrule", cfg, &r, false, echo(cfg, serde_json::json!({ "s": s, "sigma": sigma }))))
}

/// Bracket `[c_1, c_2]` of the Gagliardo/Fourier ratio; both ends must be
/// positive and resolution stable.
pub fn gagliardo_probe(cfg: &SamplingConfig, gamma: f64) -> Result<ProbeReport> {
    let r = at_both_resolutions(cfg, |g, i| {
        let mut f = cfg.field(g, 3, i);
        // The seminorm ignores the mean; drop it so every sample is non-constant.
        f.set_coeff(0, Complex64::new(0.0, 0.0))?;
        if homogeneous_seminorm(&f, gamma) == 0.0 {
            f.set_coeff(1, Complex64::new(1.0, 0.0))?;
        }
        gagliardo_ratio(&f, gamma)
    })?;
    let rep = stability_report("gagliardo", cfg, &r, true, echo(cfg, serde_json::json!({ "gamma": gamma })));
    let (lo, hi) = (min_of(&r.fine), max_of(&r.fine));
    Ok(rep.with_constant("c1", lo).with_constant("c2", hi))
}

/// `I_k` majorant check plus resolution-stable bound ratio.
pub fn good_term_probe(cfg: &SamplingConfig, sigma: f64, delta_reg: f64) -> Result<ProbeReport> {
    check_sigma(sigma)?;
    let [g1, g2] = cfg.grids()?;
    let eval = |g: GridSpec| {
        (0..cfg.samples)
            .into_par_iter()
            .map(|i| good_term_ratio(&cfg.field(g, 4, i), sigma, delta_reg))
            .collect::<Result<Vec<(f64, f64)>>>()
    };
    let (a, b) = (eval(g1)?, eval(g2)?);
    let excess = a.iter().chain(&b).map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let r = Resolution { coarse: a.iter().map(|p| p.0).collect(), fine: b.iter().map(|p| p.0).collect() };
    let mut rep = stability_report(
        "goodterm_Ik",
        cfg,
        &r,
        false,
        echo(cfg, serde_json::json!({ "sigma": sigma, "delta_reg": delta_reg })),
    )
    .with_constant("majorant_excess_max", excess);
    if excess > 0.0 {
        rep.verdict = Verdict::Fail;
    }
    Ok(rep)
}
