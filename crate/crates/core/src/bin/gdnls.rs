use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gdnls::cli::{cmd_converge, cmd_probe, cmd_run, cmd_sweep, RunConfig};
use gdnls::dynamics::Termination;
use gdnls::Error;

/// Spectral solver and verification probes for the generalized derivative NLS on the torus.
#[derive(Parser)]
#[command(name = "gdnls", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override a configuration key, e.g. `--set grid.max_mode=128`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    set: Vec<String>,
    /// Output directory.
    #[arg(long, global = true, env = "GDNLS_OUT_DIR")]
    out: Option<PathBuf>,
    /// Seed for random data and sampling probes.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve the configured initial datum and write diagnostics.
    Run {
        #[command(flatten)]
        common: Common,
    },
    /// Run one verification probe and write its JSON report.
    Probe {
        /// Probe id, e.g. cancellation, lemma26, cutoff_props.
        id: String,
        #[command(flatten)]
        common: Common,
    },
    /// Compare runs along a decreasing list of cutoffs.
    Converge {
        #[command(flatten)]
        common: Common,
    },
    /// Run a grid over sigma, amplitude and frequency.
    Sweep {
        #[command(flatten)]
        common: Common,
    },
}

fn load(common: &Common) -> Result<RunConfig, Error> {
    let mut overrides = common.set.clone();
    if let Some(s) = common.seed {
        overrides.push(format!("seed={s}"));
    }
    RunConfig::load(common.config.as_deref(), &overrides)
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::NumericalOverflow { .. } => 3,
        _ => 2,
    }
}

fn execute(cmd: Command) -> Result<u8, Error> {
    let common = match &cmd {
        Command::Run { common } | Command::Probe { common, .. } | Command::Converge { common } | Command::Sweep { common } => {
            common.clone()
        }
    };
    if let Some(n) = common.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(format!("threads: {e}")))?;
    }
    let cfg = load(&common)?;
    let out = cfg.out_dir(common.out.as_deref());
    match cmd {
        Command::Run { .. } => {
            let s = cmd_run(&cfg, &out)?;
            println!("{}", s.line());
            Ok(if s.termination == Termination::NumericalOverflow { 3 } else { 0 })
        }
        Command::Probe { id, .. } => {
            let (r, path) = cmd_probe(&id, &cfg, &out)?;
            println!("{} {} -> {}", r.probe_id, r.verdict, path.display());
            Ok(r.verdict.exit_code() as u8)
        }
        Command::Converge { .. } => {
            let (r, path) = cmd_converge(&cfg, &out)?;
            println!("cauchy={} distances_l2={:?} -> {}", r.cauchy, r.distances_l2, path.display());
            Ok(0)
        }
        Command::Sweep { .. } => {
            let (rows, path) = cmd_sweep(&cfg, &out)?;
            println!("{} cells -> {}", rows.len(), path.display());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("gdnls: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}
