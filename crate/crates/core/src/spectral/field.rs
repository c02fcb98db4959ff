use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use super::fft;
use super::grid::GridSpec;
use crate::error::{domain, Error, Result};

/// A band-limited complex function on the unit torus, stored as its Fourier
/// coefficients `u_hat(n) = int u(x) e^{-2 pi i n x} dx` for `n = -N..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: GridSpec,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: GridSpec) -> Self {
        Self { grid, coeffs: vec![Complex64::new(0.0, 0.0); grid.mode_count()] }
    }

    /// Build from coefficients listed in order `n = -N..=N`.
    pub fn from_coeffs(grid: GridSpec, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.mode_count() {
            return Err(Error::Dimension { expected: grid.mode_count(), got: coeffs.len() });
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(domain("field coefficients must be finite"));
        }
        Ok(Self { grid, coeffs })
    }

    /// Single Fourier mode `amplitude * e^{2 pi i n x}`.
    pub fn plane_wave(grid: GridSpec, n: i64, amplitude: Complex64) -> Result<Self> {
        let mut f = Self::zeros(grid);
        f.set_coeff(n, amplitude)?;
        Ok(f)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn max_mode(&self) -> usize {
        self.grid.max_mode()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    #[inline]
    fn index(&self, n: i64) -> Option<usize> {
        let nmax = self.grid.max_mode() as i64;
        (n.abs() <= nmax).then(|| (n + nmax) as usize)
    }

    /// Coefficient of mode `n`; zero outside the stored range.
    pub fn coeff(&self, n: i64) -> Complex64 {
        self.index(n).map_or(Complex64::new(0.0, 0.0), |i| self.coeffs[i])
    }

    pub fn set_coeff(&mut self, n: i64, value: Complex64) -> Result<()> {
        let i = self
            .index(n)
            .ok_or_else(|| domain(format!("mode {n} outside [-{0}, {0}]", self.max_mode())))?;
        self.coeffs[i] = value;
        Ok(())
    }

    /// Iterate `(n, u_hat(n))`.
    pub fn modes(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.grid.modes().zip(self.coeffs.iter().copied())
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Multiply coefficient `n` by `symbol(n)`.
    pub fn map_modes<F>(&self, symbol: F) -> Self
    where
        F: Fn(i64) -> Complex64,
    {
        let coeffs = self.modes().map(|(n, c)| c * symbol(n)).collect();
        Self { grid: self.grid, coeffs }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        self.map_modes(|_| factor)
    }

    /// `self + factor * other` (same grid required).
    pub fn axpy(&self, factor: Complex64, other: &Self) -> Self {
        assert_eq!(self.grid.max_mode(), other.grid.max_mode(), "mode ranges differ");
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + factor * b).collect();
        Self { grid: self.grid, coeffs }
    }

    /// Squared L2 norm by Parseval, `sum |u_hat(n)|^2`.
    pub fn l2_norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sqr().sqrt()
    }

    /// L2 pairing `(f, g) = int f conj(g) dx`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        let nmax = self.max_mode().min(other.max_mode()) as i64;
        (-nmax..=nmax).map(|n| self.coeff(n) * other.coeff(n).conj()).sum()
    }

    /// Same function represented on another grid; modes beyond the target
    /// range are discarded.
    pub fn resample(&self, grid: GridSpec) -> Self {
        let mut out = Self::zeros(grid);
        let nmax = grid.max_mode().min(self.max_mode()) as i64;
        for n in -nmax..=nmax {
            let i = out.index(n).expect("in range");
            out.coeffs[i] = self.coeff(n);
        }
        out
    }

    /// Same coefficients on a grid with a different oversampling factor.
    pub fn with_grid(&self, grid: GridSpec) -> Self {
        self.resample(grid)
    }

    pub fn to_physical(&self) -> Vec<Complex64> {
        to_physical(self)
    }

    pub fn derivative(&self, order: u32) -> Self {
        derivative(self, order)
    }
}

impl Add for &SpectralField {
    type Output = SpectralField;
    fn add(self, rhs: Self) -> SpectralField {
        self.axpy(Complex64::new(1.0, 0.0), rhs)
    }
}

impl Sub for &SpectralField {
    type Output = SpectralField;
    fn sub(self, rhs: Self) -> SpectralField {
        self.axpy(Complex64::new(-1.0, 0.0), rhs)
    }
}

impl Mul<f64> for &SpectralField {
    type Output = SpectralField;
    fn mul(self, rhs: f64) -> SpectralField {
        self.scale(Complex64::new(rhs, 0.0))
    }
}

/// Samples `u(x_j) = sum_n u_hat(n) e^{2 pi i n x_j}` at `x_j = j / M`.
pub fn to_physical(f: &SpectralField) -> Vec<Complex64> {
    let m = f.grid.physical_points();
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    for (n, c) in f.modes() {
        buf[n.rem_euclid(m as i64) as usize] = c;
    }
    fft::inverse(&mut buf);
    buf
}

/// Discrete Fourier coefficients of uniform samples, truncated to the grid's
/// mode range.
pub fn to_spectral(samples: &[Complex64], grid: GridSpec) -> Result<SpectralField> {
    let m = grid.physical_points();
    if samples.len() != m {
        return Err(Error::Dimension { expected: m, got: samples.len() });
    }
    let mut buf = samples.to_vec();
    fft::forward(&mut buf);
    let scale = 1.0 / m as f64;
    let coeffs = grid.modes().map(|n| buf[n.rem_euclid(m as i64) as usize] * scale).collect();
    SpectralField::from_coeffs(grid, coeffs)
}

/// `d^k/dx^k`: coefficient `n` times `(2 pi i n)^k`.
pub fn derivative(f: &SpectralField, order: u32) -> SpectralField {
    f.map_modes(|n| Complex64::new(0.0, 2.0 * PI * n as f64).powu(order))
}

/// `D^s`: coefficient `n` times `|n|^s`; the mean is removed for `s > 0`.
pub fn fractional_derivative(f: &SpectralField, s: f64) -> Result<SpectralField> {
    if !(s >= 0.0) || !s.is_finite() {
        return Err(domain(format!("fractional order must be >= 0, got {s}")));
    }
    Ok(f.map_modes(|n| {
        if n == 0 && s > 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new((n.unsigned_abs() as f64).powf(s), 0.0)
        }
    }))
}

/// `int_T v dx` for uniform samples of a periodic function.
pub fn integrate(samples: &[Complex64]) -> Complex64 {
    assert!(!samples.is_empty(), "cannot integrate an empty sample array");
    samples.iter().sum::<Complex64>() / samples.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::random::random_band_field;

    fn grid() -> GridSpec {
        GridSpec::new(16, 2).unwrap()
    }

    #[test]
    fn zero_field_has_zero_samples() {
        let s = to_physical(&SpectralField::zeros(grid()));
        assert!(s.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn mean_mode_is_constant() {
        let f = SpectralField::plane_wave(grid(), 0, Complex64::new(1.0, 0.0)).unwrap();
        for z in to_physical(&f) {
            assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn unit_mode_has_unit_modulus() {
        let g = grid();
        let f = SpectralField::plane_wave(g, 1, Complex64::new(1.0, 0.0)).unwrap();
        for (j, z) in to_physical(&f).iter().enumerate() {
            let x = j as f64 * g.spacing();
            assert!((z.norm() - 1.0).abs() < 1e-14);
            assert!((z - Complex64::from_polar(1.0, 2.0 * PI * x)).norm() < 1e-13);
        }
    }

    #[test]
    fn to_spectral_of_constant_and_exponential() {
        let g = grid();
        let ones = vec![Complex64::new(1.0, 0.0); g.physical_points()];
        let f = to_spectral(&ones, g).unwrap();
        assert!((f.coeff(0) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(f.modes().filter(|(n, _)| *n != 0).all(|(_, c)| c.norm() < 1e-15));

        let e: Vec<_> = (0..g.physical_points())
            .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 * g.spacing()))
            .collect();
        let f = to_spectral(&e, g).unwrap();
        for (n, c) in f.modes() {
            let expect = if n == 1 { 1.0 } else { 0.0 };
            assert!((c - Complex64::new(expect, 0.0)).norm() <= 1e-12);
        }
    }

    #[test]
    fn to_spectral_rejects_wrong_length() {
        let g = grid();
        let err = to_spectral(&[Complex64::new(0.0, 0.0); 3], g).unwrap_err();
        assert!(matches!(err, Error::Dimension { got: 3, .. }));
    }

    #[test]
    fn second_derivative_symbol() {
        let f = SpectralField::plane_wave(grid(), 1, Complex64::new(1.0, 0.0)).unwrap();
        let d2 = derivative(&f, 2);
        assert!((d2.coeff(1) - Complex64::new(-4.0 * PI * PI, 0.0)).norm() < 1e-12);
        let c = SpectralField::plane_wave(grid(), 0, Complex64::new(3.0, 1.0)).unwrap();
        assert_eq!(derivative(&c, 1).l2_norm(), 0.0);
    }

    #[test]
    fn derivative_composes() {
        let f = random_band_field(grid(), 11, 12, 3.0);
        let twice = derivative(&derivative(&f, 1), 1);
        let once = derivative(&f, 2);
        assert!((&twice - &once).l2_norm() <= 1e-12 * once.l2_norm());
    }

    #[test]
    fn fractional_symbol_and_mean() {
        let g = grid();
        let c = SpectralField::plane_wave(g, 0, Complex64::new(1.0, 0.0)).unwrap();
        assert_eq!(fractional_derivative(&c, 0.5).unwrap().l2_norm(), 0.0);
        let f = SpectralField::plane_wave(g, 2, Complex64::new(1.0, 0.0)).unwrap();
        let d = fractional_derivative(&f, 1.5).unwrap();
        assert!((d.coeff(2).re - 2f64.powf(1.5)).abs() < 1e-14);
        assert!(fractional_derivative(&f, -0.1).is_err());
    }

    #[test]
    fn integer_fractional_matches_derivative_scaling() {
        let f = random_band_field(grid(), 5, 10, 2.0);
        for k in 1..=3u32 {
            let frac = fractional_derivative(&f, k as f64).unwrap().l2_norm();
            let classical = derivative(&f, k).l2_norm() / (2.0 * PI).powi(k as i32);
            assert!((frac - classical).abs() <= 1e-12 * classical);
        }
    }

    #[test]
    fn quadrature_examples() {
        let g = grid();
        let m = g.physical_points();
        assert!((integrate(&vec![Complex64::new(1.0, 0.0); m]).re - 1.0).abs() < 1e-15);
        let e: Vec<_> =
            (0..m).map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64)).collect();
        assert!(integrate(&e).norm() <= 1e-13);
        let sq: Vec<_> = e.iter().map(|z| Complex64::new(z.norm_sqr(), 0.0)).collect();
        assert!((integrate(&sq).re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn parseval() {
        let f = random_band_field(grid(), 3, 16, 1.5);
        let s = to_physical(&f);
        let quad: f64 = integrate(&s.iter().map(|z| Complex64::new(z.norm_sqr(), 0.0)).collect::<Vec<_>>()).re;
        assert!((quad - f.l2_norm_sqr()).abs() <= 1e-12 * f.l2_norm_sqr());
    }
}
