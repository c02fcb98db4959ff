use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    /// Process exit code: 0 pass, 1 fail, 2 inconclusive.
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Inconclusive => 2,
        }
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualStats {
    pub max: f64,
    pub mean: f64,
    /// `(q, value)` pairs for `q` in 0.5, 0.9, 0.99.
    pub quantiles: Vec<(f64, f64)>,
}

impl ResidualStats {
    /// Statistics of `|r|` over the samples; empty input gives zeros.
    pub fn from_values(values: &[f64]) -> Self {
        let mut a: Vec<f64> = values.iter().map(|x| x.abs()).collect();
        if a.is_empty() {
            return Self { max: 0.0, mean: 0.0, quantiles: vec![(0.5, 0.0), (0.9, 0.0), (0.99, 0.0)] };
        }
        a.sort_by(f64::total_cmp);
        let q = |p: f64| a[((p * (a.len() - 1) as f64).round() as usize).min(a.len() - 1)];
        Self {
            max: *a.last().unwrap(),
            mean: a.iter().sum::<f64>() / a.len() as f64,
            quantiles: vec![(0.5, q(0.5)), (0.9, q(0.9)), (0.99, q(0.99))],
        }
    }
}

/// Outcome of one probe.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbeReport {
    pub schema_version: u32,
    pub probe_id: String,
    pub seed: u64,
    pub samples: usize,
    pub residual_stats: ResidualStats,
    pub estimated_constants: BTreeMap<String, f64>,
    pub verdict: Verdict,
    pub config: serde_json::Value,
}

impl ProbeReport {
    pub fn new(probe_id: &str, seed: u64, residuals: &[f64], verdict: Verdict, config: serde_json::Value) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            probe_id: probe_id.to_string(),
            seed,
            samples: residuals.len(),
            residual_stats: ResidualStats::from_values(residuals),
            estimated_constants: BTreeMap::new(),
            verdict,
            config,
        }
    }

    pub fn with_constant(mut self, name: &str, value: f64) -> Self {
        self.estimated_constants.insert(name.to_string(), value);
        self
    }

    pub fn constant(&self, name: &str) -> Option<f64> {
        self.estimated_constants.get(name).copied()
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stats() {
        let s = ResidualStats::from_values(&[1.0, -3.0, 2.0]);
        assert_eq!(s.max, 3.0);
        assert_eq!(s.mean, 2.0);
        assert_eq!(s.quantiles[0], (0.5, 2.0));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(Verdict::Pass.exit_code(), 0);
        assert_eq!(Verdict::Fail.exit_code(), 1);
        assert_eq!(Verdict::Inconclusive.exit_code(), 2);
    }
}
