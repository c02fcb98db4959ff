//! A-posteriori exponential envelope `||u(t)||_{H^2}^2 <= C_1 (1 + ||phi||_{H^2}^2) e^{C_2 t}`.

use serde::{Deserialize, Serialize};

use super::report::{ProbeReport, Verdict};
use crate::dynamics::DiagnosticsRecord;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub c1: f64,
    pub c2: f64,
}

impl Envelope {
    pub fn bound(&self, y0: f64, t: f64) -> f64 {
        self.c1 * (1.0 + y0) * (self.c2 * t).exp()
    }
}

/// `C_2` is the least-squares slope of `log y` against `t`; `C_1` is then the
/// smallest constant for which the envelope dominates every sample.
pub fn fit_envelope(t: &[f64], y: &[f64]) -> Result<Envelope> {
    if t.len() != y.len() || t.len() < 2 {
        return Err(Error::Input("envelope fit needs at least two (t, y) pairs".into()));
    }
    if y.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::Input("envelope fit needs finite non-negative samples".into()));
    }
    let pts: Vec<(f64, f64)> = t.iter().zip(y).filter(|(_, v)| **v > 0.0).map(|(a, v)| (*a, v.ln())).collect();
    let c2 = if pts.len() < 2 {
        0.0
    } else {
        let n = pts.len() as f64;
        let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let ml = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = pts.iter().map(|p| (p.0 - mt).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1 - ml)).sum();
        if sxx > 0.0 { sxy / sxx } else { 0.0 }
    };
    let base = 1.0 + y[0];
    let c1 = t.iter().zip(y).map(|(a, v)| v * (-c2 * a).exp() / base).fold(0.0, f64::max);
    Ok(Envelope { c1, c2 })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GronwallConfig {
    /// Allowed relative change of `C_2` between the full and the half window.
    pub stability_tol: f64,
    /// Largest `H^1` growth factor still treated as "bounded".
    pub h1_growth_limit: f64,
}

impl Default for GronwallConfig {
    fn default() -> Self {
        Self { stability_tol: 0.25, h1_growth_limit: 1e3 }
    }
}

/// Fit on the full record and on its first half. `C_2` is stable when
/// `|C_2 - C_2'| <= tol * max(|C_2|, 1/T)`: below a rate of `1/T` the
/// window cannot resolve growth, so changes there are not held against it.
pub fn gronwall_fit(diag: &[DiagnosticsRecord], sigma: f64, cfg: &GronwallConfig) -> Result<ProbeReport> {
    if diag.len() < 4 {
        return Err(Error::Input(format!("need at least 4 records, got {}", diag.len())));
    }
    let t: Vec<f64> = diag.iter().map(|r| r.t).collect();
    let y: Vec<f64> = diag.iter().map(|r| r.h2 * r.h2).collect();
    let config = serde_json::json!({ "sigma": sigma, "stability_tol": cfg.stability_tol, "h1_growth_limit": cfg.h1_growth_limit });
    let h1_0 = diag[0].h1;
    let h1_max = diag.iter().map(|r| r.h1).fold(0.0, f64::max);
    if !(h1_max.is_finite() && h1_max <= cfg.h1_growth_limit * h1_0.max(f64::MIN_POSITIVE)) {
        return Ok(ProbeReport::new("gronwall", 0, &[], Verdict::Inconclusive, config).with_constant("h1_max", h1_max));
    }
    let full = fit_envelope(&t, &y)?;
    let half_len = (diag.len() + 1) / 2;
    let half = fit_envelope(&t[..half_len], &y[..half_len])?;
    let span = t[t.len() - 1] - t[0];
    let scale = full.c2.abs().max(1.0 / span);
    let change = (full.c2 - half.c2).abs() / scale;
    let residuals: Vec<f64> = t.iter().zip(&y).map(|(a, v)| v / full.bound(y[0], *a)).collect();
    let finite = full.c1.is_finite() && full.c2.is_finite();
    let verdict = Verdict::from_bool(finite && change <= cfg.stability_tol);
    Ok(ProbeReport::new("gronwall", 0, &residuals, verdict, config)
        .with_constant("C1", full.c1)
        .with_constant("C2", full.c2)
        .with_constant("C2_half_window", half.c2)
        .with_constant("C2_relative_change", change)
        .with_constant("h1_max", h1_max))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_series_recovers_rate() {
        let t: Vec<f64> = (0..50).map(|i| i as f64 * 0.02).collect();
        let y: Vec<f64> = t.iter().map(|a| (3.0 * a).exp()).collect();
        let e = fit_envelope(&t, &y).unwrap();
        assert!((e.c2 - 3.0).abs() < 1e-12);
        for (a, v) in t.iter().zip(&y) {
            assert!(*v <= e.bound(y[0], *a) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn constant_series_has_zero_rate() {
        let t: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let e = fit_envelope(&t, &[4.0; 10]).unwrap();
        assert!(e.c2.abs() < 1e-15);
        assert!((e.c1 - 0.8).abs() < 1e-15);
    }
}
