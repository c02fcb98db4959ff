//! Field checkpoints: `{ "schema_version", "max_mode", "coeffs": [[re, im], ...] }`
//! with coefficients listed for `n = -N..=N`.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::SpectralField;
use super::grid::GridSpec;
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
struct Checkpoint {
    #[serde(default = "default_version")]
    schema_version: u32,
    max_mode: usize,
    coeffs: Vec<[f64; 2]>,
}

fn default_version() -> u32 {
    SCHEMA_VERSION
}

pub fn to_json(f: &SpectralField) -> Result<String> {
    let ck = Checkpoint {
        schema_version: SCHEMA_VERSION,
        max_mode: f.max_mode(),
        coeffs: f.coeffs().iter().map(|c| [c.re, c.im]).collect(),
    };
    Ok(serde_json::to_string(&ck)?)
}

/// Parse a checkpoint. The physical grid uses `oversample`, since the file
/// stores only the mode range.
pub fn from_json(text: &str, oversample: usize) -> Result<SpectralField> {
    let ck: Checkpoint = serde_json::from_str(text)?;
    if ck.schema_version != SCHEMA_VERSION {
        return Err(Error::Input(format!("unsupported checkpoint schema_version {}", ck.schema_version)));
    }
    let grid = GridSpec::new(ck.max_mode, oversample)?;
    let coeffs = ck.coeffs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect();
    SpectralField::from_coeffs(grid, coeffs)
}

pub fn write_field(path: &Path, f: &SpectralField) -> Result<()> {
    fs::write(path, to_json(f)?)?;
    Ok(())
}

pub fn read_field(path: &Path, oversample: usize) -> Result<SpectralField> {
    from_json(&fs::read_to_string(path)?, oversample)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::random::random_band_field;

    #[test]
    fn round_trip_is_bit_exact() {
        let g = GridSpec::new(12, 2).unwrap();
        let f = random_band_field(g, 5, 12, 1.5);
        let text = to_json(&f).unwrap();
        let back = from_json(&text, 2).unwrap();
        assert_eq!(f, back);
        assert_eq!(to_json(&back).unwrap(), text);
    }

    #[test]
    fn wrong_length_is_rejected() {
        let text = r#"{"schema_version":1,"max_mode":2,"coeffs":[[1.0,0.0]]}"#;
        assert!(matches!(from_json(text, 2), Err(Error::Dimension { .. })));
    }
}
