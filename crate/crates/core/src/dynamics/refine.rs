use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::evolve::{evolve, Trajectory};
use super::params::SolverParams;
use crate::error::{config, Result};
use crate::spectral::cutoff::CutoffSpec;
use crate::spectral::field::SpectralField;
use crate::spectral::norms::sobolev_norm;

/// Distances between runs at consecutive cutoffs,
/// `d_j = max_t || u_{eps_j}(t) - u_{eps_{j+1}}(t) ||_{H^s}` for `s = 0, 1`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RefinementReport {
    pub epsilons: Vec<f64>,
    pub cutoff_modes: Vec<usize>,
    pub distances_l2: Vec<f64>,
    pub distances_h1: Vec<f64>,
    /// `max_t || u_{eps_last} - u ||_{L^2}` against the run without a cutoff.
    pub last_vs_uncut_l2: f64,
    pub terminations: Vec<String>,
    /// Every `d_j` (in `L^2`) strictly smaller than its predecessor.
    pub cauchy: bool,
}

fn max_distance(a: &Trajectory, b: &Trajectory, s: f64) -> f64 {
    a.states
        .iter()
        .zip(&b.states)
        .map(|(x, y)| sobolev_norm(&(x - y), s))
        .fold(0.0, f64::max)
}

/// Run `evolve` once per cutoff (in parallel) plus once without a cutoff,
/// and compare trajectories record by record.
pub fn refinement_study(phi: &SpectralField, params: &SolverParams, epsilons: &[f64]) -> Result<RefinementReport> {
    if epsilons.len() < 2 {
        return Err(config("refinement needs at least two cutoffs"));
    }
    if epsilons.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(config("epsilons must be strictly decreasing"));
    }
    let cutoffs = epsilons.iter().map(|&e| CutoffSpec::new(e)).collect::<Result<Vec<_>>>()?;
    for c in &cutoffs {
        params.clone().with_cutoff(Some(*c)).validate_for(phi.grid())?;
    }
    let mut runs: Vec<Option<CutoffSpec>> = cutoffs.iter().copied().map(Some).collect();
    runs.push(None);
    let trajs = runs
        .par_iter()
        .map(|c| evolve(phi, &params.clone().with_cutoff(*c)))
        .collect::<Result<Vec<_>>>()?;
    let n = cutoffs.len();
    let distances_l2: Vec<f64> = (0..n - 1).map(|j| max_distance(&trajs[j], &trajs[j + 1], 0.0)).collect();
    let distances_h1 = (0..n - 1).map(|j| max_distance(&trajs[j], &trajs[j + 1], 1.0)).collect();
    let cauchy = distances_l2.windows(2).all(|w| w[1] < w[0]);
    Ok(RefinementReport {
        epsilons: epsilons.to_vec(),
        cutoff_modes: cutoffs.iter().map(|c| c.max_mode()).collect(),
        last_vs_uncut_l2: max_distance(&trajs[n - 1], &trajs[n], 0.0),
        distances_l2,
        distances_h1,
        terminations: trajs.iter().map(|t| t.termination.to_string()).collect(),
        cauchy,
    })
}
