//! Small-data trapping: `h(s) = s^2/2 - c s^{2 sigma + 2} / (2 sigma + 2)`,
//! its maximizer `m`, and the data size `delta` below which `H^1` stays under `m`.

use super::{check_sigma, FieldSamples};
use crate::error::{domain, Result};
use crate::spectral::grid::GridSpec;
use crate::spectral::norms::sobolev_norm;
use crate::spectral::random::random_band_field;

fn check_c(c: f64) -> Result<()> {
    if c > 0.0 && c.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("trapping constant c must be positive, got {c}")))
    }
}

pub fn small_data_h(s: f64, sigma: f64, c: f64) -> Result<f64> {
    check_sigma(sigma)?;
    check_c(c)?;
    if !(s >= 0.0) {
        return Err(domain(format!("h is defined on [0, inf), got {s}")));
    }
    Ok(0.5 * s * s - c / (2.0 * sigma + 2.0) * s.powf(2.0 * sigma + 2.0))
}

/// `m = (1/c)^{1/(2 sigma)}`.
pub fn threshold_m(sigma: f64, c: f64) -> Result<f64> {
    check_sigma(sigma)?;
    check_c(c)?;
    Ok((1.0 / c).powf(1.0 / (2.0 * sigma)))
}

/// Largest `delta` with `delta^2/2 + c delta^{2 sigma + 2}/(2 sigma + 2) <= h(m)`,
/// found by bisection on `[0, m]`.
pub fn trap_delta(sigma: f64, c: f64) -> Result<f64> {
    let m = threshold_m(sigma, c)?;
    let hm = small_data_h(m, sigma, c)?;
    let bound = |d: f64| 0.5 * d * d + c / (2.0 * sigma + 2.0) * d.powf(2.0 * sigma + 2.0);
    let (mut lo, mut hi) = (0.0, m);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if bound(mid) <= hm {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Empirical `c` for the bound `|Im int |u|^{2 sigma} u_x conj(u)| <= c ||u||_{H^1}^{2 sigma + 2}`:
/// the largest ratio over `samples` seeded random band-limited fields. The
/// ratio is scale invariant, so only the shape of each field matters.
pub fn estimate_c(grid: GridSpec, sigma: f64, samples: usize, seed: u64) -> Result<f64> {
    check_sigma(sigma)?;
    let band = grid.max_mode().min(16);
    let mut best: f64 = 0.0;
    for i in 0..samples as u64 {
        let max_freq = 1 + (i as usize % band);
        let decay = [0.5, 1.0, 2.0, 3.0][(i / band as u64) as usize % 4];
        let f = random_band_field(grid, seed.wrapping_add(i), max_freq, decay);
        let h1 = sobolev_norm(&f, 1.0);
        if h1 == 0.0 {
            continue;
        }
        let num = FieldSamples::new(&f).nonlinear_energy_density(sigma).abs();
        best = best.max(num / h1.powf(2.0 * sigma + 2.0));
    }
    if best > 0.0 {
        Ok(best)
    } else {
        Err(domain("no sample produced a positive ratio"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h_examples() {
        assert_eq!(small_data_h(0.0, 2.0, 1.0).unwrap(), 0.0);
        assert!((small_data_h(1.0, 2.0, 1.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(small_data_h(1.0, 2.0, 0.0).is_err());
    }

    #[test]
    fn m_examples() {
        for sigma in [1.1, 2.0, 3.5] {
            assert!((threshold_m(sigma, 1.0).unwrap() - 1.0).abs() < 1e-15);
            let c = 2f64.powf(2.0 * sigma);
            assert!((threshold_m(sigma, c).unwrap() - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn m_is_critical_point_and_argmax() {
        let (sigma, c) = (1.7, 3.2);
        let m = threshold_m(sigma, c).unwrap();
        let h = 1e-5;
        let d = (small_data_h(m + h, sigma, c).unwrap() - small_data_h(m - h, sigma, c).unwrap()) / (2.0 * h);
        assert!(d.abs() < 1e-6);
        let step = 1e-4;
        let argmax = (0..20_000)
            .map(|i| i as f64 * step)
            .max_by(|a, b| small_data_h(*a, sigma, c).unwrap().total_cmp(&small_data_h(*b, sigma, c).unwrap()))
            .unwrap();
        assert!((argmax - m).abs() <= step);
    }

    #[test]
    fn delta_below_m() {
        let (sigma, c) = (2.0, 5.0);
        let d = trap_delta(sigma, c).unwrap();
        let m = threshold_m(sigma, c).unwrap();
        assert!(d > 0.0 && d < m);
    }
}
