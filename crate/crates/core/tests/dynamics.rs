use std::f64::consts::PI;

use gdnls::dynamics::{evolve, SolverParams, Termination};
use gdnls::spectral::cutoff::CutoffSpec;
use gdnls::spectral::field::SpectralField;
use gdnls::spectral::grid::GridSpec;
use gdnls::spectral::random::random_band_with_h1;
use gdnls::verify::cancellation::{cancellation_scan, CancellationConfig};
use gdnls::verify::gronwall::fit_envelope;
use gdnls::verify::timederiv::{centred_trajectory, timederiv_probe, TrackedFunctional};
use gdnls::verify::Verdict;
use num_complex::Complex64;

#[test]
fn plane_wave_keeps_its_modulus_and_rotates_at_the_dispersion_rate() {
    let grid = GridSpec::new(16, 4).unwrap();
    let (a, n, sigma) = (0.8, 1i64, 1.5);
    let phi = SpectralField::plane_wave(grid, n, Complex64::new(a, 0.0)).unwrap();
    let params = SolverParams::new(sigma, None, 1e-4, 0.2).with_record_every(100);
    let traj = evolve(&phi, &params).unwrap();
    assert_eq!(traj.termination, Termination::Completed);
    let omega = 4.0 * PI * PI + 2.0 * PI * a.powf(2.0 * sigma);
    let exact = SpectralField::plane_wave(grid, n, Complex64::from_polar(a, -omega * 0.2)).unwrap();
    assert!((traj.final_state() - &exact).l2_norm() < 1e-9);
    for r in &traj.diagnostics {
        assert!((r.l2 - a).abs() < 1e-12);
    }
}

#[test]
fn zero_datum_stays_zero() {
    let grid = GridSpec::new(8, 4).unwrap();
    let params = SolverParams::new(2.0, Some(CutoffSpec::new(0.25).unwrap()), 1e-3, 0.05).with_record_every(10);
    let traj = evolve(&SpectralField::zeros(grid), &params).unwrap();
    assert!(traj.final_state().coeffs().iter().all(|c| *c == Complex64::new(0.0, 0.0)));
}

#[test]
fn mass_derivative_vanishes_along_the_flow() {
    let grid = GridSpec::new(32, 4).unwrap();
    let phi = random_band_with_h1(grid, 9, 6, 3.0, 0.6);
    let params = SolverParams::new(2.0, Some(CutoffSpec::new(1.0 / 16.0).unwrap()), 1e-4, 1e-3);
    let traj = centred_trajectory(&phi, &params, 1e-4).unwrap();
    let d = timederiv_probe(&traj, &TrackedFunctional::Mass).unwrap();
    assert!(d.iter().all(|v| v.abs() < 1e-8), "{d:?}");
}

#[test]
fn cancellation_fit_recovers_predicted_coefficients_off_the_canonical_point() {
    let cfg = CancellationConfig::canonical(2.0).with_weights(2.0, 0.0);
    let scan = cancellation_scan(&cfg).unwrap();
    let p = scan.configured;
    assert!(p.b1_coef.abs() < 0.2, "{p:?}");
    assert!((p.b2_coef - 2.0).abs() < 0.2, "{p:?}");
    assert!(!p.vanishes);
    assert_eq!(scan.report.verdict, Verdict::Fail);
}

#[test]
fn envelope_fit_on_synthetic_growth() {
    let t: Vec<f64> = (0..50).map(|i| i as f64 * 0.02).collect();
    let y: Vec<f64> = t.iter().map(|t| 0.5 * (1.5 * t).exp()).collect();
    let env = fit_envelope(&t, &y).unwrap();
    assert!((env.c2 - 1.5).abs() < 1e-9);
    for (ti, yi) in t.iter().zip(&y) {
        assert!(env.bound(y[0], *ti) >= *yi * (1.0 - 1e-12));
    }
}
