//! Thin wrapper over `rustfft` with a per-thread plan cache, plus spectral
//! operations on raw periodic sample arrays (all `M` DFT modes retained).

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Unnormalized forward DFT, `X_k = sum_j x_j e^{-2 pi i jk/M}`.
pub fn forward(buf: &mut [Complex64]) {
    if buf.is_empty() {
        return;
    }
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()));
    plan.process(buf);
}

/// Unnormalized inverse DFT, `x_j = sum_k X_k e^{+2 pi i jk/M}`.
pub fn inverse(buf: &mut [Complex64]) {
    if buf.is_empty() {
        return;
    }
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(buf.len()));
    plan.process(buf);
}

/// Signed wavenumber of DFT bin `k` on an `m`-point grid. The Nyquist bin of
/// an even grid is reported as `-m/2`.
#[inline]
pub fn bin_wavenumber(k: usize, m: usize) -> i64 {
    if 2 * k < m {
        k as i64
    } else {
        k as i64 - m as i64
    }
}

/// Apply the Fourier multiplier `symbol(n)` to periodic samples, keeping every
/// DFT bin. The Nyquist bin of an even-length grid is dropped since it has no
/// symmetric partner.
pub fn apply_multiplier<F>(samples: &[Complex64], symbol: F) -> Vec<Complex64>
where
    F: Fn(i64) -> Complex64,
{
    let m = samples.len();
    let mut buf = samples.to_vec();
    forward(&mut buf);
    let scale = 1.0 / m as f64;
    for (k, c) in buf.iter_mut().enumerate() {
        if m % 2 == 0 && 2 * k == m {
            *c = Complex64::new(0.0, 0.0);
        } else {
            *c *= symbol(bin_wavenumber(k, m)) * scale;
        }
    }
    inverse(&mut buf);
    buf
}

/// Spectral derivative `d/dx` of periodic samples on the unit torus.
pub fn grid_derivative(samples: &[Complex64]) -> Vec<Complex64> {
    apply_multiplier(samples, |n| Complex64::new(0.0, 2.0 * PI * n as f64))
}

/// `D^s` (symbol `|n|^s`) of periodic samples.
pub fn grid_fractional(samples: &[Complex64], s: f64) -> Vec<Complex64> {
    apply_multiplier(samples, |n| {
        if n == 0 && s > 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new((n.unsigned_abs() as f64).powf(s), 0.0)
        }
    })
}

/// Mean of `|x_j|^2`, the squared L2 norm on the unit torus.
pub fn mean_sq(samples: &[Complex64]) -> f64 {
    samples.iter().map(|z| z.norm_sqr()).sum::<f64>() / samples.len() as f64
}

pub fn sup_norm(samples: &[Complex64]) -> f64 {
    samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
