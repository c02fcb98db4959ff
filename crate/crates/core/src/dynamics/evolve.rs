use std::io::Write;

use serde::{Deserialize, Serialize};

use super::integrator::Propagator;
use super::params::{SolverParams, Termination};
use crate::error::{Error, Result};
use crate::functionals::{h2_seminorm_sqr, FieldSamples};
use crate::spectral::cutoff::apply_optional;
use crate::spectral::field::SpectralField;
use crate::spectral::norms::sobolev_norm;

pub const CSV_HEADER: &str = "t,l2,h1,h2,hs,E,E_eps,mod_energy,B1,B2,B3";

/// One time sample of the tracked norms and functionals. `l2`, `h1`, `h2`
/// and `hs` are norms (not squared); the bad terms are evaluated on `J_eps u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub l2: f64,
    pub h1: f64,
    pub h2: f64,
    pub hs: f64,
    #[serde(rename = "E")]
    pub energy: f64,
    #[serde(rename = "E_eps")]
    pub energy_eps: f64,
    pub mod_energy: f64,
    #[serde(rename = "B1")]
    pub b1: f64,
    #[serde(rename = "B2")]
    pub b2: f64,
    #[serde(rename = "B3")]
    pub b3: f64,
}

impl DiagnosticsRecord {
    pub fn compute(t: f64, u: &SpectralField, params: &SolverParams) -> Self {
        let sigma = params.sigma;
        let su = FieldSamples::new(u);
        let v = apply_optional(u, params.cutoff.as_ref());
        let sv = FieldSamples::new(&v);
        let kinetic = 0.5 * crate::functionals::derivative_norm_sqr(u, 1);
        let nl = 1.0 / (2.0 * sigma + 2.0);
        let w = params.energy_params().weights();
        let c = [
            sv.correction_c1(sigma),
            sv.correction_c2(sigma),
            sv.correction_c3(sigma, params.delta_reg),
        ];
        Self {
            t,
            l2: u.l2_norm(),
            h1: sobolev_norm(u, 1.0),
            h2: sobolev_norm(u, 2.0),
            hs: sobolev_norm(u, params.hs_order),
            energy: kinetic + nl * su.nonlinear_energy_density(sigma),
            energy_eps: kinetic + nl * sv.nonlinear_energy_density(sigma),
            mod_energy: h2_seminorm_sqr(u) + w[0] * c[0] + w[1] * c[1] + w[2] * c[2],
            b1: sv.b1(sigma),
            b2: sv.b2(sigma),
            b3: sv.b3(sigma, params.delta_reg),
        }
    }

    pub fn to_csv_row(&self) -> String {
        [
            self.t,
            self.l2,
            self.h1,
            self.h2,
            self.hs,
            self.energy,
            self.energy_eps,
            self.mod_energy,
            self.b1,
            self.b2,
            self.b3,
        ]
        .iter()
        .map(|x| csv_number(*x))
        .collect::<Vec<_>>()
        .join(",")
    }
}

/// Shortest round-trip form, switching to exponent notation for very small
/// or very large magnitudes.
pub fn csv_number(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// Write records as CSV under [`CSV_HEADER`].
pub fn write_csv<W: Write>(mut w: W, records: &[DiagnosticsRecord]) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in records {
        writeln!(w, "{}", r.to_csv_row())?;
    }
    Ok(())
}

/// Recorded states and diagnostics of one run.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<SpectralField>,
    pub diagnostics: Vec<DiagnosticsRecord>,
    pub params: SolverParams,
    pub termination: Termination,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> &SpectralField {
        self.states.last().expect("trajectory holds the initial state")
    }

    /// Spacing between consecutive records.
    pub fn record_spacing(&self) -> f64 {
        self.params.dt * self.params.record_every as f64
    }

    /// Largest relative deviation of `column(record)` from its initial value.
    pub fn relative_drift<F: Fn(&DiagnosticsRecord) -> f64>(&self, column: F) -> f64 {
        let x0 = column(&self.diagnostics[0]);
        let scale = x0.abs().max(f64::MIN_POSITIVE);
        self.diagnostics.iter().map(|r| (column(r) - x0).abs()).fold(0.0, f64::max) / scale
    }

    /// Relative drift of the squared L2 norm.
    pub fn mass_drift(&self) -> f64 {
        self.relative_drift(|r| r.l2 * r.l2)
    }

    pub fn energy_eps_drift(&self) -> f64 {
        self.relative_drift(|r| r.energy_eps)
    }
}

/// Monitor verdict for a diagnostics history; the first record supplies the
/// initial values for relative thresholds.
pub fn detect_blowup(history: &[DiagnosticsRecord], params: &SolverParams) -> Termination {
    let Some(first) = history.first() else {
        return Termination::Completed;
    };
    let h1_max = params.h1_blowup_threshold.resolve(first.h1);
    let h2_max = params.h2_alarm_threshold.resolve(first.h2);
    for r in history {
        let vals = [r.l2, r.h1, r.h2, r.hs, r.energy, r.energy_eps, r.mod_energy, r.b1, r.b2, r.b3];
        if vals.iter().any(|x| !x.is_finite()) {
            return Termination::NumericalOverflow;
        }
        if r.h1 > h1_max {
            return Termination::H1BlowupIndicator;
        }
        if r.h2 > h2_max {
            return Termination::H2GrowthWithBoundedH1;
        }
    }
    Termination::Completed
}

/// Integrate from `J_eps phi` (or `phi` without a cutoff) to `t_end`,
/// recording every `record_every` steps. Stops early when a monitor trips.
pub fn evolve(phi: &SpectralField, params: &SolverParams) -> Result<Trajectory> {
    evolve_with(phi, params, |_| {})
}

/// [`evolve`] with a callback invoked on every diagnostics record as it is produced.
pub fn evolve_with<F>(phi: &SpectralField, params: &SolverParams, mut on_record: F) -> Result<Trajectory>
where
    F: FnMut(&DiagnosticsRecord),
{
    params.validate_for(phi.grid())?;
    if !phi.is_finite() {
        return Err(Error::Input("initial data is not finite".into()));
    }
    let steps = params.steps()?;
    let prop = Propagator::from_params(*phi.grid(), params)?;
    let mut u = apply_optional(phi, params.cutoff.as_ref());
    let first = DiagnosticsRecord::compute(0.0, &u, params);
    on_record(&first);
    let mut traj = Trajectory {
        times: vec![0.0],
        states: vec![u.clone()],
        diagnostics: vec![first],
        params: params.clone(),
        termination: Termination::Completed,
    };
    for k in 1..=steps {
        u = match prop.step(&u) {
            Ok(next) => next,
            Err(Error::NumericalOverflow { .. }) => {
                traj.termination = Termination::NumericalOverflow;
                return Ok(traj);
            }
            Err(e) => return Err(e),
        };
        if k % params.record_every == 0 || k == steps {
            let t = k as f64 * params.dt;
            let rec = DiagnosticsRecord::compute(t, &u, params);
            on_record(&rec);
            traj.times.push(t);
            traj.states.push(u.clone());
            traj.diagnostics.push(rec);
            let flag = detect_blowup(&[traj.diagnostics[0], rec], params);
            if flag != Termination::Completed {
                traj.termination = flag;
                return Ok(traj);
            }
        }
    }
    Ok(traj)
}
