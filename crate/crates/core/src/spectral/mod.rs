//! Fourier representation of periodic functions on the unit torus and the
//! linear spectral operators acting on them.

pub mod checkpoint;
pub mod cutoff;
pub mod fft;
pub mod field;
pub mod grid;
pub mod norms;
pub mod random;

pub use cutoff::{apply_cutoff, CutoffSpec};
pub use field::{derivative, fractional_derivative, integrate, to_physical, to_spectral, SpectralField};
pub use grid::GridSpec;
pub use norms::{gagliardo_seminorm, homogeneous_seminorm, sobolev_norm};
