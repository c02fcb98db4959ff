//! Mass and E_eps drift for random data, with a Gronwall envelope on ||u||_{H^2}^2.

use gdnls::dynamics::{evolve, SolverParams};
use gdnls::spectral::cutoff::CutoffSpec;
use gdnls::spectral::grid::GridSpec;
use gdnls::spectral::random::{random_band_with_h1, DEFAULT_DECAY};
use gdnls::verify::gronwall::{gronwall_fit, GronwallConfig};

fn main() -> gdnls::Result<()> {
    let grid = GridSpec::new(64, 4)?;
    let phi = random_band_with_h1(grid, 2024, 8, DEFAULT_DECAY, 0.5);
    let params = SolverParams::new(2.0, Some(CutoffSpec::new(1.0 / 32.0)?), 1e-4, 1.0).with_record_every(100);
    let traj = evolve(&phi, &params)?;
    println!("termination: {}", traj.termination.as_str());
    println!("mass drift  {:.2e}", traj.mass_drift());
    println!("E_eps drift {:.2e}", traj.energy_eps_drift());
    let rep = gronwall_fit(&traj.diagnostics, 2.0, &GronwallConfig::default())?;
    println!("envelope: C1 = {:.4}, C2 = {:.4e} ({})", rep.constant("C1").unwrap(), rep.constant("C2").unwrap(), rep.verdict);
    Ok(())
}
