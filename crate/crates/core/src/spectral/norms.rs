use std::f64::consts::PI;

use super::field::SpectralField;
use crate::error::{domain, Result};

/// `( sum_n (1 + n^2)^s |u_hat(n)|^2 )^{1/2}`.
pub fn sobolev_norm(f: &SpectralField, s: f64) -> f64 {
    f.modes()
        .map(|(n, c)| (1.0 + (n * n) as f64).powf(s) * c.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// `( sum_n |n|^{2s} |u_hat(n)|^2 )^{1/2}`. The zero mode contributes only
/// when `s == 0`.
pub fn homogeneous_seminorm(f: &SpectralField, s: f64) -> f64 {
    f.modes()
        .map(|(n, c)| {
            let w = if n == 0 {
                if s == 0.0 { 1.0 } else { 0.0 }
            } else {
                (n.unsigned_abs() as f64).powf(2.0 * s)
            };
            w * c.norm_sqr()
        })
        .sum::<f64>()
        .sqrt()
}

/// Quadrature estimate of
/// `( int_T int_{y_min <= |y| < 1/2} |u(x+y) - u(x)|^2 / |y|^{1+2 gamma} dy dx )^{1/2}`.
///
/// The `y` integral uses the trapezoid rule on the nodes `j / M` of the
/// physical grid. For each node the `x` integral is evaluated exactly from the
/// coefficients, `int |u(x+y) - u(x)|^2 dx = sum_n |u_hat(n)|^2 4 sin^2(pi n y)`,
/// which is what the uniform `x` quadrature returns for a band-limited `u`.
pub fn gagliardo_seminorm(f: &SpectralField, gamma: f64, y_min: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(domain(format!("gamma must lie in (0, 1), got {gamma}")));
    }
    if !(y_min > 0.0 && y_min < 0.25) {
        return Err(domain(format!("y_min must lie in (0, 1/4), got {y_min}")));
    }
    let m = f.grid().physical_points();
    let h = 1.0 / m as f64;
    let weights: Vec<(i64, f64)> = f.modes().filter(|(n, _)| *n != 0).map(|(n, c)| (n, c.norm_sqr())).collect();
    let shift_energy = |y: f64| -> f64 {
        weights
            .iter()
            .map(|&(n, w)| {
                let s = (PI * n as f64 * y).sin();
                4.0 * w * s * s
            })
            .sum()
    };
    let kernel = |y: f64| shift_energy(y) / y.powf(1.0 + 2.0 * gamma);

    let j_min = (y_min / h - 1e-9).ceil().max(1.0) as usize;
    let j_max = m / 2;
    if j_min > j_max {
        return Ok(0.0);
    }
    let mut sum = 0.0;
    for j in j_min..=j_max {
        let w = if j == j_min || j == j_max { 0.5 } else { 1.0 };
        sum += w * kernel(j as f64 * h);
    }
    // Odd M: the last node sits below 1/2; close the interval with a half cell.
    if m % 2 == 1 {
        sum += 0.5 * h * 0.5 * (kernel(j_max as f64 * h) + kernel(0.5)) / h;
    }
    // Integrand is even in y.
    Ok((2.0 * h * sum).sqrt())
}

/// Default Gagliardo cut-off: one physical grid spacing.
pub fn default_y_min(f: &SpectralField) -> f64 {
    f.grid().spacing()
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;
    use crate::spectral::field::{fractional_derivative, SpectralField};
    use crate::spectral::grid::GridSpec;
    use crate::spectral::random::random_band_field;

    fn grid() -> GridSpec {
        GridSpec::new(16, 4).unwrap()
    }

    #[test]
    fn sobolev_examples() {
        let g = grid();
        let c = SpectralField::plane_wave(g, 0, Complex64::new(1.0, 0.0)).unwrap();
        for s in [-1.0, 0.0, 0.5, 2.0, 3.7] {
            assert!((sobolev_norm(&c, s) - 1.0).abs() < 1e-15);
        }
        let e = SpectralField::plane_wave(g, 1, Complex64::new(1.0, 0.0)).unwrap();
        assert!((sobolev_norm(&e, 2.0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn homogeneous_examples() {
        let g = grid();
        let c = SpectralField::plane_wave(g, 0, Complex64::new(2.0, 0.0)).unwrap();
        assert_eq!(homogeneous_seminorm(&c, 1.3), 0.0);
        let e = SpectralField::plane_wave(g, 1, Complex64::new(1.0, 0.0)).unwrap();
        for s in [0.2, 1.0, 2.5] {
            assert!((homogeneous_seminorm(&e, s) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn homogeneous_matches_fractional_derivative() {
        let f = random_band_field(grid(), 17, 16, 2.0);
        for s in [0.3, 1.0, 1.75] {
            let a = homogeneous_seminorm(&f, s);
            let b = fractional_derivative(&f, s).unwrap().l2_norm();
            assert!((a - b).abs() <= 1e-12 * b);
        }
    }

    #[test]
    fn order_zero_is_l2() {
        let f = random_band_field(grid(), 2, 10, 1.0);
        let l2 = f.l2_norm();
        assert!((sobolev_norm(&f, 0.0) - l2).abs() <= 1e-14 * l2);
        assert!((homogeneous_seminorm(&f, 0.0) - l2).abs() <= 1e-14 * l2);
    }

    #[test]
    fn gagliardo_constant_is_zero() {
        let c = SpectralField::plane_wave(grid(), 0, Complex64::new(1.0, 0.5)).unwrap();
        assert_eq!(gagliardo_seminorm(&c, 0.5, 0.01).unwrap(), 0.0);
    }

    #[test]
    fn gagliardo_translation_invariant() {
        let f = random_band_field(grid(), 8, 12, 2.0);
        let a = 0.137;
        let shifted = f.map_modes(|n| Complex64::from_polar(1.0, 2.0 * PI * n as f64 * a));
        let g0 = gagliardo_seminorm(&f, 0.6, default_y_min(&f)).unwrap();
        let g1 = gagliardo_seminorm(&shifted, 0.6, default_y_min(&f)).unwrap();
        assert!((g0 - g1).abs() <= 1e-12 * g0);
    }

    #[test]
    fn gagliardo_domain() {
        let f = random_band_field(grid(), 8, 12, 2.0);
        assert!(gagliardo_seminorm(&f, 0.0, 0.01).is_err());
        assert!(gagliardo_seminorm(&f, 1.0, 0.01).is_err());
        assert!(gagliardo_seminorm(&f, 0.5, 0.3).is_err());
    }

    #[test]
    fn gagliardo_single_mode_against_direct_integral() {
        // Reference: midpoint rule on a much finer y-grid.
        let g = grid();
        let f = SpectralField::plane_wave(g, 3, Complex64::new(1.0, 0.0)).unwrap();
        let gamma = 0.4;
        let y_min = g.spacing();
        let fine = 200_000;
        let dy = (0.5 - y_min) / fine as f64;
        let direct: f64 = (0..fine)
            .map(|i| {
                let y = y_min + (i as f64 + 0.5) * dy;
                4.0 * (PI * 3.0 * y).sin().powi(2) / y.powf(1.0 + 2.0 * gamma) * dy
            })
            .sum::<f64>()
            * 2.0;
        let q = gagliardo_seminorm(&f, gamma, y_min).unwrap().powi(2);
        assert!((q - direct).abs() < 2e-3 * direct, "{q} vs {direct}");
    }
}
