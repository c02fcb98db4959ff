//! Small parameter sweep over sigma and amplitude, written to a temporary directory.

use gdnls::cli::{cmd_sweep, RunConfig};

fn main() -> gdnls::Result<()> {
    let cfg = RunConfig::load(
        None,
        &["t_end=0.1".into(), "sweep.sigma=[1.5, 2.0, 3.0]".into(), "sweep.amplitude=[0.25, 0.5]".into()],
    )?;
    let out = std::env::temp_dir().join("gdnls-sweep-example");
    let (rows, path) = cmd_sweep(&cfg, &out)?;
    for r in &rows {
        println!("{}", r.to_csv_row());
    }
    println!("wrote {}", path.display());
    Ok(())
}
