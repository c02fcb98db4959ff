//! Run configuration: TOML file, `key=value` overrides, defaults.
//!
//! Precedence is overrides > file > defaults. Overrides use dotted paths into
//! the TOML tree (`grid.max_mode=128`, `initial_data.kind=plane_wave`) and
//! their values are parsed as TOML, falling back to a bare string.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{SolverParams, Threshold};
use crate::error::{config, Error, Result};
use crate::functionals::{canonical_beta, DEFAULT_DELTA_REG};
use crate::spectral::checkpoint::read_field;
use crate::spectral::cutoff::CutoffSpec;
use crate::spectral::field::SpectralField;
use crate::spectral::grid::GridSpec;
use crate::spectral::random::{random_band_with_h1, DEFAULT_DECAY};

pub const OUT_DIR_ENV: &str = "GDNLS_OUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub max_mode: usize,
    pub oversample: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { max_mode: 64, oversample: 4 }
    }
}

/// Initial datum `phi`; the solver starts from `J_eps phi`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialData {
    /// `A e^{2 pi i n x}`.
    PlaneWave { amplitude: f64, n: i64 },
    /// Periodized Gaussian of standard deviation `width` centred at `center`,
    /// times the carrier `e^{2 pi i carrier x}`.
    GaussianBump {
        amplitude: f64,
        width: f64,
        #[serde(default = "half")]
        center: f64,
        #[serde(default)]
        carrier: i64,
    },
    /// Seeded random band-limited field with prescribed `H^1` norm. Without
    /// `seed` the run seed is used.
    RandomBand {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
        max_freq: usize,
        h1_target: f64,
        #[serde(default = "default_decay")]
        decay: f64,
    },
    /// Field checkpoint; `scale` multiplies the stored coefficients.
    File {
        path: PathBuf,
        #[serde(default = "one")]
        scale: f64,
    },
}

fn half() -> f64 {
    0.5
}

fn one() -> f64 {
    1.0
}

fn default_decay() -> f64 {
    DEFAULT_DECAY
}

impl Default for InitialData {
    fn default() -> Self {
        InitialData::RandomBand { seed: None, max_freq: 8, h1_target: 0.5, decay: DEFAULT_DECAY }
    }
}

impl InitialData {
    pub fn build(&self, grid: GridSpec, run_seed: u64) -> Result<SpectralField> {
        match self {
            InitialData::PlaneWave { amplitude, n } => SpectralField::plane_wave(grid, *n, Complex64::new(*amplitude, 0.0)),
            InitialData::GaussianBump { amplitude, width, center, carrier } => {
                if !(*width > 0.0) {
                    return Err(config(format!("initial_data.width must be positive, got {width}")));
                }
                // Fourier coefficients of the periodized Gaussian, shifted by the carrier.
                let mut f = SpectralField::zeros(grid);
                let norm = amplitude * width * (2.0 * PI).sqrt();
                for n in grid.modes() {
                    let k = (n - carrier) as f64;
                    let mag = norm * (-2.0 * PI * PI * k * k * width * width).exp();
                    let c = Complex64::from_polar(mag, -2.0 * PI * k * center);
                    f.set_coeff(n, c)?;
                }
                Ok(f)
            }
            InitialData::RandomBand { seed, max_freq, h1_target, decay } => {
                Ok(random_band_with_h1(grid, seed.unwrap_or(run_seed), *max_freq, *decay, *h1_target))
            }
            InitialData::File { path, scale } => {
                let f = read_field(path, grid.oversample())?;
                if f.max_mode() > grid.max_mode() {
                    return Err(config(format!(
                        "initial_data.path holds {} modes, more than grid.max_mode = {}",
                        f.max_mode(),
                        grid.max_mode()
                    )));
                }
                Ok(&f.resample(grid) * *scale)
            }
        }
    }

    /// Copy with the amplitude parameter replaced (sweep axis).
    pub fn with_amplitude(&self, a: f64) -> Self {
        let mut d = self.clone();
        match &mut d {
            InitialData::PlaneWave { amplitude, .. } | InitialData::GaussianBump { amplitude, .. } => *amplitude = a,
            InitialData::RandomBand { h1_target, .. } => *h1_target = a,
            InitialData::File { scale, .. } => *scale = a,
        }
        d
    }

    /// Copy with the frequency parameter replaced (sweep axis).
    pub fn with_frequency(&self, k: i64) -> Result<Self> {
        let mut d = self.clone();
        match &mut d {
            InitialData::PlaneWave { n, .. } => *n = k,
            InitialData::GaussianBump { carrier, .. } => *carrier = k,
            InitialData::RandomBand { max_freq, .. } => {
                *max_freq = usize::try_from(k).map_err(|_| config("random_band frequency must be >= 0"))?
            }
            InitialData::File { .. } => return Err(config("a file datum has no frequency to sweep")),
        }
        Ok(d)
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Output directory; falls back to `$GDNLS_OUT_DIR`, then `./out`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
}

/// Sweep axes; an empty axis keeps the base value.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default)]
    pub sigma: Vec<f64>,
    #[serde(default)]
    pub amplitude: Vec<f64>,
    #[serde(default)]
    pub frequency: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergeConfig {
    pub epsilons: Vec<f64>,
}

impl Default for ConvergeConfig {
    fn default() -> Self {
        Self { epsilons: vec![1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0] }
    }
}

/// Optional overrides of probe-specific defaults.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_mode: Option<usize>,
    /// Sobolev order for commutator, chain rule, hs growth and cutoff checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    /// Initial `H^1` size for the small-data probe.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h1: Option<f64>,
    /// Horizon for the small-data probe.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub sigma: f64,
    /// Apply the cutoff `J_eps`; without it only the grid truncates.
    pub use_cutoff: bool,
    pub epsilon: f64,
    pub dt: f64,
    pub t_end: f64,
    pub delta_reg: f64,
    pub h1_blowup_threshold: Threshold,
    pub h2_alarm_threshold: Threshold,
    pub record_every: usize,
    pub hs_order: f64,
    pub alpha: f64,
    /// Defaults to `2 / (sigma + 1)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    pub seed: u64,
    pub grid: GridConfig,
    pub initial_data: InitialData,
    pub output: OutputConfig,
    pub sweep: SweepConfig,
    pub converge: ConvergeConfig,
    pub probe: ProbeConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            sigma: 2.0,
            use_cutoff: true,
            epsilon: 1.0 / 32.0,
            dt: 1e-4,
            t_end: 1.0,
            delta_reg: DEFAULT_DELTA_REG,
            h1_blowup_threshold: Threshold::RelativeToInitial(1e3),
            h2_alarm_threshold: Threshold::RelativeToInitial(1e6),
            record_every: 10,
            hs_order: 1.75,
            alpha: 2.0,
            beta: None,
            seed: 2024,
            grid: GridConfig::default(),
            initial_data: InitialData::default(),
            output: OutputConfig::default(),
            sweep: SweepConfig::default(),
            converge: ConvergeConfig::default(),
            probe: ProbeConfig::default(),
        }
    }
}

impl RunConfig {
    /// Defaults, then `file` (if any), then each `key=value` override.
    pub fn load(file: Option<&Path>, overrides: &[String]) -> Result<Self> {
        let mut layer = match file {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| config(format!("cannot read config {}: {e}", p.display())))?;
                text.parse::<toml::Table>().map_err(|e| config(format!("{}: {e}", p.display())))?
            }
            None => toml::Table::new(),
        };
        for o in overrides {
            apply_override(&mut layer, o)?;
        }
        let mut tree = toml::Table::try_from(RunConfig::default()).map_err(|e| config(e.to_string()))?;
        merge(&mut tree, layer);
        let cfg: RunConfig = toml::Value::Table(tree).try_into().map_err(|e: toml::de::Error| config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn beta(&self) -> f64 {
        self.beta.unwrap_or_else(|| canonical_beta(self.sigma))
    }

    pub fn grid(&self) -> Result<GridSpec> {
        GridSpec::new(self.grid.max_mode, self.grid.oversample)
            .map_err(|e| config(format!("grid: {e}")))
    }

    pub fn cutoff(&self) -> Result<Option<CutoffSpec>> {
        if self.use_cutoff {
            Ok(Some(CutoffSpec::new(self.epsilon).map_err(|e| config(format!("epsilon: {e}")))?))
        } else {
            Ok(None)
        }
    }

    pub fn solver_params(&self) -> Result<SolverParams> {
        let mut p = SolverParams::new(self.sigma, self.cutoff()?, self.dt, self.t_end);
        p.delta_reg = self.delta_reg;
        p.h1_blowup_threshold = self.h1_blowup_threshold;
        p.h2_alarm_threshold = self.h2_alarm_threshold;
        p.record_every = self.record_every;
        p.hs_order = self.hs_order;
        p.alpha = self.alpha;
        p.beta = self.beta();
        Ok(p)
    }

    pub fn initial_field(&self) -> Result<SpectralField> {
        self.initial_data.build(self.grid()?, self.seed)
    }

    pub fn validate(&self) -> Result<()> {
        let grid = self.grid()?;
        self.solver_params()?.validate_for(&grid).map_err(|e| match e {
            Error::Config(m) | Error::Domain(m) => config(m),
            other => other,
        })
    }

    /// `--out`, then `output.dir`, then `$GDNLS_OUT_DIR`, then `./out`.
    pub fn out_dir(&self, cli: Option<&Path>) -> PathBuf {
        cli.map(Path::to_path_buf)
            .or_else(|| self.output.dir.clone())
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("out"))
    }
}

/// Deep-merge `top` into `base`. A table whose `kind` changes replaces the
/// base table outright, so fields of the old variant do not leak into the new one.
pub fn merge(base: &mut toml::Table, top: toml::Table) {
    for (k, v) in top {
        match (base.get_mut(&k), v) {
            (Some(toml::Value::Table(b)), toml::Value::Table(t)) => {
                let kind_changed = t.get("kind").is_some_and(|kind| b.get("kind") != Some(kind));
                if kind_changed {
                    *b = t;
                } else {
                    merge(b, t);
                }
            }
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

/// Set `path.to.key = value` in a TOML tree, creating tables as needed.
pub fn apply_override(tree: &mut toml::Table, assignment: &str) -> Result<()> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| config(format!("override {assignment:?} is not of the form key=value")))?;
    let key = key.trim();
    let raw = raw.trim();
    if key.is_empty() {
        return Err(config(format!("override {assignment:?} has an empty key")));
    }
    let value = parse_value(raw);
    let parts: Vec<&str> = key.split('.').collect();
    let mut table = tree;
    for part in &parts[..parts.len() - 1] {
        let entry = table.entry(part.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        table = entry
            .as_table_mut()
            .ok_or_else(|| config(format!("override {key}: {part} is not a table")))?;
    }
    table.insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

fn parse_value(raw: &str) -> toml::Value {
    format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let c = RunConfig::default();
        let text = c.to_toml().unwrap();
        assert_eq!(RunConfig::from_toml(&text).unwrap(), c);
    }

    #[test]
    fn overrides_take_precedence() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.toml");
        std::fs::write(&p, "sigma = 1.5\ndt = 1e-3\n[grid]\nmax_mode = 32\n").unwrap();
        let c = RunConfig::load(Some(&p), &["sigma=3".into(), "initial_data.kind=plane_wave".into(), "initial_data.amplitude=1".into(), "initial_data.n=2".into()]).unwrap();
        assert_eq!(c.sigma, 3.0);
        assert_eq!(c.dt, 1e-3);
        assert_eq!(c.grid.max_mode, 32);
        assert_eq!(c.grid.oversample, 4);
        assert_eq!(c.initial_data, InitialData::PlaneWave { amplitude: 1.0, n: 2 });
    }

    #[test]
    fn unknown_key_is_config_error() {
        assert!(matches!(RunConfig::load(None, &["sigmaa=2".into()]), Err(Error::Config(_))));
        assert!(matches!(RunConfig::load(None, &["sigma=0.5".into()]), Err(Error::Config(_))));
        assert!(matches!(RunConfig::load(None, &["nonsense".into()]), Err(Error::Config(_))));
    }

    #[test]
    fn bump_coefficients_match_samples() {
        let g = GridSpec::new(32, 4).unwrap();
        let d = InitialData::GaussianBump { amplitude: 1.0, width: 0.08, center: 0.5, carrier: 0 };
        let f = d.build(g, 0).unwrap();
        let v = f.to_physical();
        let m = v.len();
        let j = m / 2;
        let expected: f64 = (-3..=3).map(|k| (-(0.5 - 0.5 - k as f64).powi(2) / (2.0 * 0.08 * 0.08)).exp()).sum();
        assert!((v[j].re - expected).abs() < 1e-12, "{} vs {expected}", v[j].re);
        assert!(v[j].im.abs() < 1e-12);
    }
}
