//! Seeded band-limited random fields.
//!
//! Coefficients are complex Gaussians with a smoothness envelope
//! `(1 + |n|)^{-decay}`, drawn in the fixed order `0, 1, -1, 2, -2, ...` so a
//! wider band extends a narrower one drawn from the same seed.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::field::SpectralField;
use super::grid::GridSpec;
use super::norms::sobolev_norm;

pub const DEFAULT_DECAY: f64 = 3.0;

pub fn random_band_field(grid: GridSpec, seed: u64, max_freq: usize, decay: f64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = SpectralField::zeros(grid);
    let band = max_freq.min(grid.max_mode()) as i64;
    let mut draw = |n: i64, f: &mut SpectralField| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        let env = (1.0 + n.abs() as f64).powf(-decay);
        f.set_coeff(n, Complex64::new(re, im) * env).expect("mode within grid");
    };
    draw(0, &mut f);
    for n in 1..=band {
        draw(n, &mut f);
        draw(-n, &mut f);
    }
    f
}

/// Random band-limited field rescaled to a prescribed `H^1` norm. A zero
/// target yields the zero field.
pub fn random_band_with_h1(
    grid: GridSpec,
    seed: u64,
    max_freq: usize,
    decay: f64,
    h1_target: f64,
) -> SpectralField {
    let f = random_band_field(grid, seed, max_freq, decay);
    let h1 = sobolev_norm(&f, 1.0);
    if h1 == 0.0 || h1_target == 0.0 {
        return SpectralField::zeros(grid);
    }
    &f * (h1_target / h1)
}
