//! Cauchy behaviour of the cutoff approximations as eps decreases.

use gdnls::cli::{InitialData, RunConfig};
use gdnls::dynamics::refinement_study;

fn main() -> gdnls::Result<()> {
    let mut cfg = RunConfig::default();
    cfg.initial_data = InitialData::GaussianBump { amplitude: 0.5, width: 0.1, center: 0.5, carrier: 0 };
    cfg.t_end = 0.5;
    let phi = cfg.initial_field()?;
    let r = refinement_study(&phi, &cfg.solver_params()?, &[1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0])?;
    println!("L2 distances between consecutive cutoffs: {:?}", r.distances_l2);
    println!("cauchy: {}", r.cauchy);
    Ok(())
}
