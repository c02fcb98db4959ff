pub mod cli;
pub mod dynamics;
pub mod error;
pub mod functionals;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
