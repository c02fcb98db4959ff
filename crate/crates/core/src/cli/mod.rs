//! Configuration and subcommands behind the `gdnls` binary.

pub mod commands;
pub mod config;

pub use commands::{cmd_converge, cmd_probe, cmd_run, cmd_sweep, run_probe, PROBE_IDS};
pub use config::{InitialData, RunConfig};
