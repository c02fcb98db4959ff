//! Time integration of the equation and of its Fourier-truncated
//! approximation, with blowup monitors and cutoff-refinement studies.

pub mod evolve;
pub mod integrator;
pub mod params;
pub mod refine;
pub mod rhs;

pub use evolve::{detect_blowup, evolve, evolve_with, write_csv, DiagnosticsRecord, Trajectory, CSV_HEADER};
pub use integrator::{step, Propagator};
pub use params::{SolverParams, Termination, Threshold};
pub use refine::{refinement_study, RefinementReport};
pub use rhs::{nonlinearity_g, rhs_approx};
