//! Initial-data families for the identity probes: a localized, possibly
//! chirped and skewed bump of concentration `kappa` on a constant background.
//! With amplitude `a0 * sqrt(kappa0 / kappa)` the `H^1` norm stays roughly
//! fixed while `||u_xx||^2` grows like `kappa^2`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::spectral::field::{to_spectral, SpectralField};
use crate::spectral::grid::GridSpec;

/// `c0 + A exp(-(kappa y)^2 / 2) (1 + skew kappa y) e^{i (phase + chirp kappa y)}`,
/// `y = x - center` wrapped to `[-1/2, 1/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BumpSpec {
    pub background: f64,
    pub amplitude: f64,
    pub kappa: f64,
    pub chirp: f64,
    pub skew: f64,
    pub phase: f64,
    pub center: f64,
}

impl BumpSpec {
    pub fn value(&self, x: f64) -> Complex64 {
        let mut y = x - self.center;
        y -= y.round();
        let ky = self.kappa * y;
        let env = (-0.5 * ky * ky).exp() * (1.0 + self.skew * ky);
        Complex64::new(self.background, 0.0) + self.amplitude * env * Complex64::from_polar(1.0, self.phase + self.chirp * ky)
    }

    /// Sampled on the grid and projected to its mode range.
    pub fn field(&self, grid: GridSpec) -> Result<SpectralField> {
        let m = grid.physical_points();
        let s: Vec<Complex64> = (0..m).map(|j| self.value(j as f64 / m as f64)).collect();
        to_spectral(&s, grid)
    }

    /// Mode beyond which the bump spectrum is below roughly `1e-16` of its peak.
    pub fn bandwidth(&self) -> f64 {
        (self.chirp.abs() * self.kappa + 8.6 * self.kappa) / (2.0 * PI)
    }
}

/// Parameters of a concentration family at (approximately) fixed `H^1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub background: f64,
    /// Bump amplitude at `kappa0`.
    pub amplitude: f64,
    pub kappa0: f64,
}

impl Default for FamilySpec {
    fn default() -> Self {
        Self { background: 1.0, amplitude: 0.5, kappa0: 16.0 }
    }
}

impl FamilySpec {
    pub fn bump(&self, kappa: f64, chirp: f64, skew: f64, phase: f64) -> BumpSpec {
        BumpSpec {
            background: self.background,
            amplitude: self.amplitude * (self.kappa0 / kappa).sqrt(),
            kappa,
            chirp,
            skew,
            phase,
            center: 0.37,
        }
    }

    /// Scaling levels `kappa0 * ratio^j`, each with a fixed set of shape
    /// variants (unchirped and chirped, two phases).
    pub fn scaling_levels(&self, levels: usize, ratio: f64) -> Vec<Vec<BumpSpec>> {
        (0..levels)
            .map(|j| {
                let kappa = self.kappa0 * ratio.powi(j as i32);
                let mut v = Vec::new();
                for chirp in [0.0, 0.7] {
                    for phase in [0.9, 2.0] {
                        v.push(self.bump(kappa, chirp, 0.4, phase));
                    }
                }
                v
            })
            .collect()
    }

    /// `count` bumps with `kappa` geometrically spaced over `octaves` octaves
    /// from `kappa_lo`, and seeded random chirp, skew and phase.
    pub fn random_scan(&self, count: usize, kappa_lo: f64, octaves: f64, seed: u64) -> Vec<BumpSpec> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|i| {
                let frac = if count > 1 { i as f64 / (count - 1) as f64 } else { 0.0 };
                let kappa = kappa_lo * 2f64.powf(octaves * frac);
                let chirp = rng.random_range(-1.0..1.0);
                let skew = rng.random_range(-0.6..0.6);
                let phase = rng.random_range(0.0..2.0 * PI);
                self.bump(kappa, chirp, skew, phase)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::norms::sobolev_norm;

    #[test]
    fn h1_roughly_fixed_across_concentration() {
        let fam = FamilySpec::default();
        let g = GridSpec::new(256, 2).unwrap();
        let h: Vec<f64> = [12.0, 48.0, 160.0]
            .iter()
            .map(|&k| sobolev_norm(&fam.bump(k, 0.0, 0.4, 0.9).field(g).unwrap(), 1.0))
            .collect();
        for x in &h {
            assert!((x / h[0] - 1.0).abs() < 0.1, "{h:?}");
        }
    }

    #[test]
    fn resolved_bump_has_negligible_tail() {
        let b = FamilySpec::default().bump(48.0, 0.7, 0.4, 0.9);
        let g = GridSpec::new(128, 2).unwrap();
        assert!(b.bandwidth() < 128.0);
        let f = b.field(g).unwrap();
        let tail: f64 = f.modes().filter(|(n, _)| n.abs() > 100).map(|(_, c)| c.norm()).fold(0.0, f64::max);
        assert!(tail < 1e-13);
    }
}
