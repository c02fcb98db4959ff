//! The four subcommands as library functions. Each writes its artifacts under
//! an output directory and returns a value the binary turns into an exit code.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use super::config::RunConfig;
use crate::dynamics::evolve::csv_number;
use crate::dynamics::{evolve, evolve_with, refinement_study, RefinementReport, Termination, CSV_HEADER};
use crate::error::{config, Error, Result};
use crate::spectral::checkpoint::write_field;
use crate::verify::cancellation::{cancellation_scan, CancellationConfig};
use crate::verify::cutoff_props::{cutoff_props_probe, CutoffPropsConfig};
use crate::verify::gronwall::{gronwall_fit, GronwallConfig};
use crate::verify::growth::{hs_growth_probe, HsGrowthConfig};
use crate::verify::inequalities::{chain_rule_probe, commutator_probe, gagliardo_probe, good_term_probe, SamplingConfig};
use crate::verify::lemmas::{delta_sensitivity, identity_probe, Identity, IdentityProbeConfig};
use crate::verify::report::{ProbeReport, SCHEMA_VERSION};
use crate::verify::trapping::{small_data_probe, SmallDataConfig};

pub const PROBE_IDS: [&str; 14] = [
    "lemma26",
    "lemma27",
    "lemma28",
    "lemma29",
    "modenergy",
    "cancellation",
    "gronwall",
    "commutator",
    "chainrule",
    "hsgrowth",
    "smalldata",
    "gagliardo",
    "goodterm_Ik",
    "cutoff_props",
];

fn prepare(out: &Path) -> Result<()> {
    fs::create_dir_all(out).map_err(|e| config(format!("cannot create output directory {}: {e}", out.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(value)?)?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub schema_version: u32,
    pub termination: Termination,
    pub t_final: f64,
    pub records: usize,
    pub mass_drift: f64,
    pub energy_eps_drift: f64,
    pub max_h1: f64,
    pub max_h2: f64,
    pub csv: PathBuf,
    pub checkpoint: PathBuf,
}

impl RunSummary {
    pub fn line(&self) -> String {
        format!(
            "termination={} t={} records={} mass_drift={:.3e} energy_eps_drift={:.3e} max_h1={:.6e} max_h2={:.6e}",
            self.termination, self.t_final, self.records, self.mass_drift, self.energy_eps_drift, self.max_h1, self.max_h2
        )
    }
}

/// Evolve the configured datum, streaming `diagnostics.csv` and writing
/// `final_field.json`, `run_config.toml` and `run_summary.json`.
pub fn cmd_run(cfg: &RunConfig, out: &Path) -> Result<RunSummary> {
    let params = cfg.solver_params()?;
    let phi = cfg.initial_field()?;
    prepare(out)?;
    fs::write(out.join("run_config.toml"), cfg.to_toml()?)?;
    let csv = out.join("diagnostics.csv");
    let mut w = BufWriter::new(File::create(&csv)?);
    writeln!(w, "{CSV_HEADER}")?;
    let mut io_err: Option<std::io::Error> = None;
    let traj = evolve_with(&phi, &params, |r| {
        if io_err.is_none() {
            if let Err(e) = writeln!(w, "{}", r.to_csv_row()) {
                io_err = Some(e);
            }
        }
    })?;
    if let Some(e) = io_err {
        return Err(e.into());
    }
    w.flush()?;
    let checkpoint = out.join("final_field.json");
    write_field(&checkpoint, traj.final_state())?;
    let summary = RunSummary {
        schema_version: SCHEMA_VERSION,
        termination: traj.termination,
        t_final: *traj.times.last().unwrap_or(&0.0),
        records: traj.len(),
        mass_drift: traj.mass_drift(),
        energy_eps_drift: traj.energy_eps_drift(),
        max_h1: traj.diagnostics.iter().map(|r| r.h1).fold(0.0, f64::max),
        max_h2: traj.diagnostics.iter().map(|r| r.h2).fold(0.0, f64::max),
        csv,
        checkpoint,
    };
    write_json(&out.join("run_summary.json"), &summary)?;
    Ok(summary)
}

fn sampling(cfg: &RunConfig) -> SamplingConfig {
    let d = SamplingConfig::default();
    SamplingConfig {
        samples: cfg.probe.samples.unwrap_or(d.samples),
        max_mode: cfg.probe.max_mode.unwrap_or(d.max_mode),
        seed: cfg.seed,
        ..d
    }
}

fn identity_config(cfg: &RunConfig) -> IdentityProbeConfig {
    let d = IdentityProbeConfig::default();
    IdentityProbeConfig {
        sigma: cfg.sigma,
        delta_reg: cfg.delta_reg,
        max_mode: cfg.probe.max_mode.unwrap_or(d.max_mode),
        ..d
    }
}

/// Run the probe `id` with parameters drawn from `cfg`.
pub fn run_probe(id: &str, cfg: &RunConfig) -> Result<ProbeReport> {
    let sigma = cfg.sigma;
    let report = match id {
        "lemma26" | "lemma27" | "lemma28" | "lemma29" | "modenergy" => {
            let ident = Identity::from_probe_id(id).expect("listed identity id");
            let icfg = identity_config(cfg);
            let mut r = identity_probe(ident, &icfg)?;
            if ident == Identity::Correction3 {
                let bump = icfg.family.scaling_levels(1, icfg.level_ratio)[0][0];
                let d = delta_sensitivity(sigma, [cfg.delta_reg, cfg.delta_reg * 1e4], &bump, icfg.max_mode)?;
                r = r
                    .with_constant("delta_b3_relative_change", d.b3_relative_change)
                    .with_constant("delta_residual_relative_change", d.residual_relative_change);
            }
            r
        }
        "cancellation" => {
            let mut c = CancellationConfig::canonical(sigma).with_weights(cfg.alpha, cfg.beta());
            c.delta_reg = cfg.delta_reg;
            c.seed = cfg.seed;
            if let Some(n) = cfg.probe.samples {
                c.samples = n;
            }
            if let Some(m) = cfg.probe.max_mode {
                c.max_mode = m;
            }
            cancellation_scan(&c)?.report
        }
        "gronwall" => {
            let traj = evolve(&cfg.initial_field()?, &cfg.solver_params()?)?;
            let mut r = gronwall_fit(&traj.diagnostics, sigma, &GronwallConfig::default())?;
            r.seed = cfg.seed;
            r
        }
        "commutator" => commutator_probe(&sampling(cfg), cfg.probe.s.unwrap_or(1.75), cfg.probe.gamma.unwrap_or(0.75))?,
        "chainrule" => chain_rule_probe(&sampling(cfg), cfg.probe.s.unwrap_or(1.6), sigma)?,
        "gagliardo" => gagliardo_probe(&sampling(cfg), cfg.probe.gamma.unwrap_or(0.5))?,
        "goodterm_Ik" => good_term_probe(&sampling(cfg), sigma, cfg.delta_reg)?,
        "hsgrowth" => {
            let d = HsGrowthConfig::default();
            hs_growth_probe(&HsGrowthConfig { sigma, s: cfg.probe.s.unwrap_or(d.s), seed: cfg.seed, ..d })?
        }
        "smalldata" => {
            let d = SmallDataConfig::default();
            small_data_probe(&SmallDataConfig {
                sigma,
                h1: cfg.probe.h1.unwrap_or(d.h1),
                t_end: cfg.probe.t_end.unwrap_or(d.t_end),
                seed: cfg.seed,
                ..d
            })?
        }
        "cutoff_props" => {
            let d = CutoffPropsConfig::default();
            cutoff_props_probe(&CutoffPropsConfig {
                samples: cfg.probe.samples.unwrap_or(d.samples),
                seed: cfg.seed,
                s: cfg.probe.s.unwrap_or(d.s),
                ..d
            })?
        }
        other => {
            return Err(config(format!("unknown probe id {other:?}; expected one of {}", PROBE_IDS.join(", "))));
        }
    };
    Ok(report)
}

/// [`run_probe`] plus `probe_<id>.json` under `out`.
pub fn cmd_probe(id: &str, cfg: &RunConfig, out: &Path) -> Result<(ProbeReport, PathBuf)> {
    let report = run_probe(id, cfg)?;
    prepare(out)?;
    let path = out.join(format!("probe_{id}.json"));
    fs::write(&path, report.to_json()?)?;
    Ok((report, path))
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceOutput {
    pub schema_version: u32,
    #[serde(flatten)]
    pub report: RefinementReport,
}

/// Refinement study over `converge.epsilons`, written to `convergence.json`.
pub fn cmd_converge(cfg: &RunConfig, out: &Path) -> Result<(RefinementReport, PathBuf)> {
    let phi = cfg.initial_field()?;
    let report = refinement_study(&phi, &cfg.solver_params()?, &cfg.converge.epsilons)?;
    prepare(out)?;
    let path = out.join("convergence.json");
    write_json(&path, &ConvergenceOutput { schema_version: SCHEMA_VERSION, report: report.clone() })?;
    Ok((report, path))
}

pub const SWEEP_HEADER: &str = "sigma,amplitude,frequency,termination,max_h1,max_h2,mass_drift,energy_eps_drift";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub sigma: f64,
    /// `None` when the axis is not swept.
    pub amplitude: Option<f64>,
    pub frequency: Option<i64>,
    /// Termination flag, or `error: ...` when the cell could not run.
    pub termination: String,
    pub max_h1: f64,
    pub max_h2: f64,
    pub mass_drift: f64,
    pub energy_eps_drift: f64,
}

impl SweepRow {
    pub fn to_csv_row(&self) -> String {
        let opt = |x: Option<String>| x.unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{}",
            csv_number(self.sigma),
            opt(self.amplitude.map(csv_number)),
            opt(self.frequency.map(|f| f.to_string())),
            self.termination.replace(',', ";"),
            csv_number(self.max_h1),
            csv_number(self.max_h2),
            csv_number(self.mass_drift),
            csv_number(self.energy_eps_drift)
        )
    }
}

fn sweep_cell(base: &RunConfig, sigma: f64, amplitude: Option<f64>, frequency: Option<i64>) -> SweepRow {
    let run = || -> Result<SweepRow> {
        let mut c = base.clone();
        c.sigma = sigma;
        if let Some(a) = amplitude {
            c.initial_data = c.initial_data.with_amplitude(a);
        }
        if let Some(f) = frequency {
            c.initial_data = c.initial_data.with_frequency(f)?;
        }
        c.validate()?;
        let traj = evolve(&c.initial_field()?, &c.solver_params()?)?;
        Ok(SweepRow {
            sigma,
            amplitude,
            frequency,
            termination: traj.termination.to_string(),
            max_h1: traj.diagnostics.iter().map(|r| r.h1).fold(0.0, f64::max),
            max_h2: traj.diagnostics.iter().map(|r| r.h2).fold(0.0, f64::max),
            mass_drift: traj.mass_drift(),
            energy_eps_drift: traj.energy_eps_drift(),
        })
    };
    run().unwrap_or_else(|e: Error| SweepRow {
        sigma,
        amplitude,
        frequency,
        termination: format!("error: {e}"),
        max_h1: f64::NAN,
        max_h2: f64::NAN,
        mass_drift: f64::NAN,
        energy_eps_drift: f64::NAN,
    })
}

/// One run per point of `sigma x amplitude x frequency`, in parallel; the
/// rows are collected and written to `sweep.csv` in grid order.
pub fn cmd_sweep(cfg: &RunConfig, out: &Path) -> Result<(Vec<SweepRow>, PathBuf)> {
    let sigmas = if cfg.sweep.sigma.is_empty() { vec![cfg.sigma] } else { cfg.sweep.sigma.clone() };
    let amps: Vec<Option<f64>> =
        if cfg.sweep.amplitude.is_empty() { vec![None] } else { cfg.sweep.amplitude.iter().copied().map(Some).collect() };
    let freqs: Vec<Option<i64>> =
        if cfg.sweep.frequency.is_empty() { vec![None] } else { cfg.sweep.frequency.iter().copied().map(Some).collect() };
    let mut cells = Vec::with_capacity(sigmas.len() * amps.len() * freqs.len());
    for &s in &sigmas {
        for &a in &amps {
            for &f in &freqs {
                cells.push((s, a, f));
            }
        }
    }
    let rows: Vec<SweepRow> = cells.par_iter().map(|&(s, a, f)| sweep_cell(cfg, s, a, f)).collect();
    prepare(out)?;
    let path = out.join("sweep.csv");
    let mut w = BufWriter::new(File::create(&path)?);
    writeln!(w, "{SWEEP_HEADER}")?;
    for r in &rows {
        writeln!(w, "{}", r.to_csv_row())?;
    }
    w.flush()?;
    Ok((rows, path))
}
