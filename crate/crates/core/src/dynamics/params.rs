use serde::{Deserialize, Serialize};

use crate::error::{config, domain, Result};
use crate::functionals::{canonical_beta, ModifiedEnergyParams, DEFAULT_DELTA_REG};
use crate::spectral::cutoff::CutoffSpec;
use crate::spectral::grid::GridSpec;

/// Monitor threshold, either absolute or a multiple of the initial value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Threshold {
    Absolute(f64),
    RelativeToInitial(f64),
}

impl Threshold {
    pub fn resolve(&self, initial: f64) -> f64 {
        match *self {
            Threshold::Absolute(x) => x,
            Threshold::RelativeToInitial(k) => k * initial,
        }
    }

    fn value(&self) -> f64 {
        match *self {
            Threshold::Absolute(x) | Threshold::RelativeToInitial(x) => x,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Completed,
    H1BlowupIndicator,
    H2GrowthWithBoundedH1,
    NumericalOverflow,
}

impl Termination {
    pub fn as_str(&self) -> &'static str {
        match self {
            Termination::Completed => "completed",
            Termination::H1BlowupIndicator => "h1_blowup_indicator",
            Termination::H2GrowthWithBoundedH1 => "h2_growth_with_bounded_h1",
            Termination::NumericalOverflow => "numerical_overflow",
        }
    }
}

impl std::fmt::Display for Termination {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

pub const DEFAULT_HS_ORDER: f64 = 1.75;

/// Settings for one simulation of the (optionally cut-off) equation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverParams {
    pub sigma: f64,
    /// `None` integrates the full equation; the grid still band-limits the nonlinearity.
    pub cutoff: Option<CutoffSpec>,
    pub dt: f64,
    pub t_end: f64,
    pub delta_reg: f64,
    pub h1_blowup_threshold: Threshold,
    pub h2_alarm_threshold: Threshold,
    pub record_every: usize,
    /// Order `s` of the `hs` diagnostics column.
    pub hs_order: f64,
    /// Modified-energy weights used for the `mod_energy` column.
    pub alpha: f64,
    pub beta: f64,
}

impl SolverParams {
    pub fn new(sigma: f64, cutoff: Option<CutoffSpec>, dt: f64, t_end: f64) -> Self {
        Self {
            sigma,
            cutoff,
            dt,
            t_end,
            delta_reg: DEFAULT_DELTA_REG,
            h1_blowup_threshold: Threshold::RelativeToInitial(1e3),
            h2_alarm_threshold: Threshold::RelativeToInitial(1e6),
            record_every: 1,
            hs_order: DEFAULT_HS_ORDER,
            alpha: 2.0,
            beta: canonical_beta(sigma),
        }
    }

    pub fn with_record_every(mut self, k: usize) -> Self {
        self.record_every = k;
        self
    }

    pub fn with_cutoff(mut self, cutoff: Option<CutoffSpec>) -> Self {
        self.cutoff = cutoff;
        self
    }

    pub fn with_t_end(mut self, t_end: f64) -> Self {
        self.t_end = t_end;
        self
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = dt;
        self
    }

    pub fn energy_params(&self) -> ModifiedEnergyParams {
        ModifiedEnergyParams { alpha: self.alpha, beta: self.beta, sigma: self.sigma, delta_reg: self.delta_reg }
    }

    /// Number of steps; `t_end` must be an integer multiple of `dt`.
    pub fn steps(&self) -> Result<usize> {
        let r = self.t_end / self.dt;
        let n = r.round();
        if (r - n).abs() > 1e-6 * n.max(1.0) || n < 1.0 {
            return Err(config(format!("t_end = {} is not a positive multiple of dt = {}", self.t_end, self.dt)));
        }
        Ok(n as usize)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 1.0 && self.sigma.is_finite()) {
            return Err(domain(format!("sigma must be > 1, got {}", self.sigma)));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(config(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.dt < self.t_end && self.t_end.is_finite()) {
            return Err(config(format!("need dt < t_end, got dt = {}, t_end = {}", self.dt, self.t_end)));
        }
        if !(self.delta_reg >= 0.0) {
            return Err(config("delta_reg must be >= 0"));
        }
        if !(self.h1_blowup_threshold.value() > 0.0 && self.h2_alarm_threshold.value() > 0.0) {
            return Err(config("monitor thresholds must be positive"));
        }
        if self.record_every == 0 {
            return Err(config("record_every must be >= 1"));
        }
        if !(self.hs_order >= 0.0) {
            return Err(config("hs_order must be >= 0"));
        }
        self.steps()?;
        Ok(())
    }

    /// Validate and check that the cutoff is representable on `grid`.
    pub fn validate_for(&self, grid: &GridSpec) -> Result<()> {
        self.validate()?;
        if let Some(c) = &self.cutoff {
            if c.max_mode() > grid.max_mode() {
                return Err(config(format!(
                    "cutoff K = {} exceeds grid max_mode = {}",
                    c.max_mode(),
                    grid.max_mode()
                )));
            }
        }
        Ok(())
    }
}
