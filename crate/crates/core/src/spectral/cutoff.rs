use serde::{Deserialize, Serialize};

use super::field::SpectralField;
use crate::error::{domain, Result};

/// Fourier cutoff `J_eps`: keeps modes `|n| <= floor(1 / eps)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct CutoffSpec {
    epsilon: f64,
    max_mode: usize,
}

impl CutoffSpec {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(domain(format!("cutoff epsilon must lie in (0, 1), got {epsilon}")));
        }
        // Relative slack so that eps = 1/K reproduces K despite rounding.
        let max_mode = (1.0 / epsilon * (1.0 + 1e-12)).floor() as usize;
        Ok(Self { epsilon, max_mode })
    }

    /// Cutoff with `floor(1/eps) = k`, i.e. `eps = 1/k`.
    pub fn from_max_mode(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(domain("a cutoff needs at least K = 2 (eps < 1)"));
        }
        Self::new(1.0 / k as f64)
    }

    /// Dyadic cutoff `eps = 2^{-j}`.
    pub fn dyadic(j: u32) -> Result<Self> {
        Self::new(0.5f64.powi(j as i32))
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `K = floor(1 / eps)`.
    pub fn max_mode(&self) -> usize {
        self.max_mode
    }

    pub fn apply(&self, f: &SpectralField) -> SpectralField {
        apply_cutoff(f, self)
    }
}

impl TryFrom<f64> for CutoffSpec {
    type Error = crate::Error;
    fn try_from(eps: f64) -> Result<Self> {
        Self::new(eps)
    }
}

impl From<CutoffSpec> for f64 {
    fn from(c: CutoffSpec) -> f64 {
        c.epsilon
    }
}

/// Zero every coefficient with `|n| > floor(1/eps)`.
pub fn apply_cutoff(f: &SpectralField, c: &CutoffSpec) -> SpectralField {
    let mut out = f.clone();
    let k = c.max_mode() as i64;
    let nmax = f.max_mode() as i64;
    for (i, coeff) in out.coeffs_mut().iter_mut().enumerate() {
        let n = i as i64 - nmax;
        if n.abs() > k {
            *coeff = num_complex::Complex64::new(0.0, 0.0);
        }
    }
    out
}

/// Apply an optional cutoff; `None` is the identity.
pub fn apply_optional(f: &SpectralField, c: Option<&CutoffSpec>) -> SpectralField {
    match c {
        Some(c) => apply_cutoff(f, c),
        None => f.clone(),
    }
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;
    use crate::spectral::grid::GridSpec;

    #[test]
    fn floor_of_inverse() {
        assert_eq!(CutoffSpec::new(0.3).unwrap().max_mode(), 3);
        assert_eq!(CutoffSpec::new(1.0 / 32.0).unwrap().max_mode(), 32);
        assert_eq!(CutoffSpec::new(1.0 / 3.0).unwrap().max_mode(), 3);
        assert_eq!(CutoffSpec::from_max_mode(7).unwrap().max_mode(), 7);
        assert_eq!(CutoffSpec::dyadic(4).unwrap().max_mode(), 16);
        assert!(CutoffSpec::new(1.0).is_err());
        assert!(CutoffSpec::new(0.0).is_err());
    }

    #[test]
    fn keeps_three_drops_four() {
        let g = GridSpec::new(8, 1).unwrap();
        let mut f = SpectralField::zeros(g);
        f.set_coeff(3, Complex64::new(1.0, 0.0)).unwrap();
        f.set_coeff(-4, Complex64::new(2.0, 0.0)).unwrap();
        f.set_coeff(4, Complex64::new(2.0, 0.0)).unwrap();
        let j = apply_cutoff(&f, &CutoffSpec::new(0.3).unwrap());
        assert_eq!(j.coeff(3), Complex64::new(1.0, 0.0));
        assert_eq!(j.coeff(4), Complex64::new(0.0, 0.0));
        assert_eq!(j.coeff(-4), Complex64::new(0.0, 0.0));
    }
}
