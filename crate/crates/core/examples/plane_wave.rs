//! Evolve a plane wave and compare against the exact travelling solution.

use std::f64::consts::PI;

use gdnls::dynamics::{evolve, SolverParams};
use gdnls::spectral::cutoff::CutoffSpec;
use gdnls::spectral::field::SpectralField;
use gdnls::spectral::grid::GridSpec;
use num_complex::Complex64;

fn main() -> gdnls::Result<()> {
    let (a, n, sigma, t_end) = (1.0, 2, 2.0, 1.0);
    let grid = GridSpec::new(64, 4)?;
    let phi = SpectralField::plane_wave(grid, n, Complex64::new(a, 0.0))?;
    let omega = 4.0 * PI * PI * (n * n) as f64 + 2.0 * PI * n as f64 * a.powf(2.0 * sigma);
    let exact = SpectralField::plane_wave(grid, n, Complex64::from_polar(a, -omega * t_end))?;
    for dt in [4e-4, 2e-4, 1e-4] {
        let params = SolverParams::new(sigma, Some(CutoffSpec::new(1.0 / 32.0)?), dt, t_end).with_record_every(1000);
        let traj = evolve(&phi, &params)?;
        println!("dt = {dt:.0e}: L2 error {:.3e}", (traj.final_state() - &exact).l2_norm());
    }
    Ok(())
}
