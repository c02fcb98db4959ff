//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//! Runs with `harness = false` so the lines are always printed.

use std::f64::consts::PI;
use std::time::Instant;

use gdnls::dynamics::{evolve, refinement_study, SolverParams, Termination};
use gdnls::spectral::cutoff::CutoffSpec;
use gdnls::spectral::field::SpectralField;
use gdnls::spectral::grid::GridSpec;
use gdnls::spectral::random::{random_band_with_h1, DEFAULT_DECAY};
use gdnls::verify::cancellation::{cancellation_scan, CancellationConfig};
use gdnls::verify::cutoff_props::{cutoff_props_probe, CutoffPropsConfig};
use gdnls::verify::gronwall::{gronwall_fit, GronwallConfig};
use gdnls::verify::growth::{hs_growth_probe, HsGrowthConfig};
use gdnls::verify::inequalities::{chain_rule_probe, commutator_probe, gagliardo_probe, SamplingConfig};
use gdnls::verify::lemmas::{
    delta_sensitivity, evaluate_family, identity_report, raw_h2_rate_growth, Identity, IdentityProbeConfig,
};
use gdnls::verify::trapping::{small_data_probe, SmallDataConfig};
use gdnls::verify::Verdict;
use num_complex::Complex64;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn conservation_run() -> gdnls::dynamics::Trajectory {
    let grid = GridSpec::new(64, 4).unwrap();
    let phi = random_band_with_h1(grid, 2024, 8, DEFAULT_DECAY, 0.5);
    let params = SolverParams::new(2.0, Some(CutoffSpec::new(1.0 / 32.0).unwrap()), 1e-4, 1.0).with_record_every(100);
    evolve(&phi, &params).unwrap()
}

fn plane_wave_error(dt: f64) -> f64 {
    let (a, n, sigma, t) = (1.0, 2i64, 2.0, 1.0);
    let grid = GridSpec::new(64, 4).unwrap();
    let phi = SpectralField::plane_wave(grid, n, Complex64::new(a, 0.0)).unwrap();
    let params = SolverParams::new(sigma, Some(CutoffSpec::new(1.0 / 32.0).unwrap()), dt, t).with_record_every(usize::MAX);
    let traj = evolve(&phi, &params).unwrap();
    let nf = n as f64;
    let omega = 4.0 * PI * PI * nf * nf + 2.0 * PI * nf * a.powf(2.0 * sigma);
    let exact = SpectralField::plane_wave(grid, n, Complex64::from_polar(a, -omega * t)).unwrap();
    (traj.final_state() - &exact).l2_norm()
}

fn criteria_1_2() -> (Outcome, Outcome) {
    let start = Instant::now();
    let traj = conservation_run();
    let secs = start.elapsed().as_secs_f64();
    let m = traj.mass_drift();
    let e = traj.energy_eps_drift();
    let done = traj.termination == Termination::Completed;
    (
        outcome(done && m <= 1e-8, format!("relative L2 drift {m:.2e} (<= 1e-8), {secs:.2} s")),
        outcome(done && e <= 1e-6, format!("relative E_eps drift {e:.2e} (<= 1e-6)")),
    )
}

fn criterion_3() -> Outcome {
    let e_coarse = plane_wave_error(2e-4);
    let e = plane_wave_error(1e-4);
    let e_fine = plane_wave_error(5e-5);
    let ratio = e_coarse / e;
    outcome(
        e <= 1e-8 && ratio >= 12.0,
        format!(
            "L2 error {e:.2e} at dt=1e-4 (<= 1e-8); halving 2e-4 -> 1e-4 reduces error {ratio:.1}x (>= 12); \
             1e-4 -> 5e-5 gives {:.1}x (error {e_fine:.1e}, roundoff floor)",
            e / e_fine
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for sigma in [1.25, 1.5, 2.0, 3.0] {
        let scan = cancellation_scan(&CancellationConfig::canonical(sigma)).unwrap();
        let canonical_ok = scan.report.verdict == Verdict::Pass;
        let o = scan.origin;
        let origin_fails = !o.vanishes;
        let origin_close = (o.b1_coef + 4.0).abs() <= 0.2 && (o.b2_coef + 2.0).abs() <= 0.2;
        pass &= canonical_ok && origin_fails && origin_close;
        parts.push(format!(
            "sigma={sigma}: canonical ({:+.3},{:+.3}) {}, origin ({:+.3},{:+.3})",
            scan.canonical.b1_coef, scan.canonical.b2_coef, scan.report.verdict, o.b1_coef, o.b2_coef
        ));
    }
    outcome(pass, parts.join("; "))
}

fn identity_samples(sigma: f64) -> (IdentityProbeConfig, Vec<gdnls::verify::lemmas::IdentitySample>) {
    let cfg = IdentityProbeConfig { sigma, ..IdentityProbeConfig::default() };
    let levels = cfg.family.scaling_levels(cfg.levels, cfg.level_ratio);
    let bumps: Vec<_> = levels.iter().enumerate().flat_map(|(j, l)| l.iter().map(move |b| (j, *b))).collect();
    let samples = evaluate_family(&cfg, &bumps).unwrap();
    (cfg, samples)
}

fn criteria_5_6() -> (Outcome, Outcome) {
    let (cfg, samples) = identity_samples(2.0);
    let me = identity_report(Identity::ModifiedEnergy, &cfg, &samples);
    let c = |r: &gdnls::verify::ProbeReport, k: &str| r.constant(k).unwrap_or(f64::NAN);
    let norm_growth = [c(&me, "normalized_growth_0"), c(&me, "normalized_growth_1")];
    let h2_growth = [c(&me, "h2_growth_0"), c(&me, "h2_growth_1")];
    let raw = raw_h2_rate_growth(&samples);
    let pass5 = me.verdict == Verdict::Pass
        && norm_growth.iter().all(|g| *g < 2.0)
        && h2_growth.iter().all(|g| *g >= 16.0)
        && raw.iter().all(|g| *g > 8.0);
    let c5 = outcome(
        pass5,
        format!(
            "normalized residual growth {:.2}, {:.2} (< 2); H2^2 growth {:.1}, {:.1} (>= 16); raw d/dt||u_xx||^2 growth {:.1}, {:.1} (> 8)",
            norm_growth[0], norm_growth[1], h2_growth[0], h2_growth[1], raw[0], raw[1]
        ),
    );

    let mut pass6 = true;
    let mut parts = Vec::new();
    for id in [Identity::H2Seminorm, Identity::Correction1, Identity::Correction2, Identity::Correction3] {
        let r = identity_report(id, &cfg, &samples);
        pass6 &= r.verdict == Verdict::Pass && c(&r, "spacing_change_max") <= 0.1;
        parts.push(format!(
            "{} {} (growth {:.2}/{:.2}, dt-change {:.1e})",
            r.probe_id,
            r.verdict,
            c(&r, "normalized_growth_0"),
            c(&r, "normalized_growth_1"),
            c(&r, "spacing_change_max")
        ));
    }
    let bump = cfg.family.scaling_levels(1, cfg.level_ratio)[0][0];
    let d = delta_sensitivity(1.01, [1e-14, 1e-10], &bump, cfg.max_mode).unwrap();
    let reported = d.b3_relative_change.is_finite() && d.residual_relative_change.is_finite();
    pass6 &= reported;
    parts.push(format!(
        "sigma=1.01 delta 1e-14 -> 1e-10: B3 change {:.2e}, residual change {:.2e} of dC3/dt",
        d.b3_relative_change, d.residual_relative_change
    ));
    (c5, outcome(pass6, parts.join("; ")))
}

fn criterion_7() -> Outcome {
    let grid = GridSpec::new(64, 4).unwrap();
    let mut phi = SpectralField::zeros(grid);
    // Gaussian bump of width 0.1 centred at 1/2, amplitude 0.5.
    let w = 0.1;
    for n in grid.modes() {
        let k = n as f64;
        let mag = 0.5 * w * (2.0 * PI).sqrt() * (-2.0 * PI * PI * k * k * w * w).exp();
        phi.set_coeff(n, Complex64::from_polar(mag, -PI * k)).unwrap();
    }
    let params = SolverParams::new(2.0, None, 1e-4, 0.5).with_record_every(50);
    let r = refinement_study(&phi, &params, &[1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0]).unwrap();
    outcome(r.cauchy, format!("L2 pair distances {:.2e}, {:.2e} (strictly decreasing)", r.distances_l2[0], r.distances_l2[1]))
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let r = small_data_probe(&SmallDataConfig::default()).unwrap();
    let c = |k: &str| r.constant(k).unwrap();
    outcome(
        r.verdict == Verdict::Pass && c("h1_growth_max") <= 2.0 && c("sup_h1") < c("m"),
        format!(
            "sup H1 {:.4} (<= 2 x 0.05, < m = {:.3}, c_est = {:.3}, delta = {:.3}), {:.1} s",
            c("sup_h1"),
            c("m"),
            c("c_est"),
            c("delta"),
            start.elapsed().as_secs_f64()
        ),
    )
}

fn criterion_9() -> Outcome {
    let cfg = SamplingConfig::default();
    let reps = [
        commutator_probe(&cfg, 1.75, 0.75).unwrap(),
        chain_rule_probe(&cfg, 1.6, 1.5).unwrap(),
        gagliardo_probe(&cfg, 0.5).unwrap(),
    ];
    let mut pass = cfg.samples >= 1000;
    let mut parts = Vec::new();
    for r in &reps {
        pass &= r.verdict == Verdict::Pass;
        parts.push(format!(
            "{} {} (max ratio {:.3} -> {:.3}, growth {:+.2e})",
            r.probe_id,
            r.verdict,
            r.constant("max_ratio_coarse").unwrap(),
            r.constant("max_ratio_fine").unwrap(),
            r.constant("max_ratio_growth").unwrap()
        ));
    }
    let g = &reps[2];
    parts.push(format!(
        "gagliardo bracket [{:.3}, {:.3}] (lower shrink {:+.2e})",
        g.constant("c1").unwrap(),
        g.constant("c2").unwrap(),
        g.constant("min_ratio_shrink").unwrap()
    ));
    let hs = hs_growth_probe(&HsGrowthConfig::default()).unwrap();
    pass &= hs.verdict == Verdict::Pass;
    parts.push(format!(
        "hsgrowth {} (c in [{:.4}, {:.4}], variation {:.2e}, envelope ratio {:.3})",
        hs.verdict,
        hs.constant("c_min").unwrap(),
        hs.constant("c_max").unwrap(),
        hs.constant("c_variation").unwrap(),
        hs.constant("envelope_ratio_max").unwrap()
    ));
    outcome(pass, parts.join("; "))
}

fn criterion_10() -> Outcome {
    let cfg = CutoffPropsConfig::default();
    let r = cutoff_props_probe(&cfg).unwrap();
    let fails: f64 = r.estimated_constants.iter().filter(|(k, _)| k.starts_with("failures_")).map(|(_, v)| v).sum();
    outcome(
        r.verdict == Verdict::Pass && cfg.samples >= 1000,
        format!(
            "{} fields, {fails} failures, max adjoint defect {:.1e}, max smoothing constant {:.3}",
            cfg.samples,
            r.constant("max_adjoint_defect").unwrap(),
            r.constant("max_smoothing_constant").unwrap()
        ),
    )
}

fn criterion_11() -> Outcome {
    let traj = conservation_run();
    let r = gronwall_fit(&traj.diagnostics, 2.0, &GronwallConfig::default()).unwrap();
    let grid = GridSpec::new(16, 4).unwrap();
    let wave = SpectralField::plane_wave(grid, 2, Complex64::new(1.0, 0.0)).unwrap();
    let pw = evolve(&wave, &SolverParams::new(2.0, None, 1e-3, 1.0).with_record_every(10)).unwrap();
    let rp = gronwall_fit(&pw.diagnostics, 2.0, &GronwallConfig::default()).unwrap();
    outcome(
        r.verdict == Verdict::Pass && rp.verdict == Verdict::Pass,
        format!(
            "random run C1 {:.3}, C2 {:.3e} (half window {:.3e}, change {:.2e} <= 0.25); plane wave C2 {:.1e}",
            r.constant("C1").unwrap(),
            r.constant("C2").unwrap(),
            r.constant("C2_half_window").unwrap(),
            r.constant("C2_relative_change").unwrap(),
            rp.constant("C2").unwrap()
        ),
    )
}

fn main() {
    let start = Instant::now();
    let (c1, c2) = criteria_1_2();
    let (c5, c6) = criteria_5_6();
    let results = [
        (1, "mass conservation", c1),
        (2, "E_eps conservation", c2),
        (3, "plane-wave exactness", criterion_3()),
        (4, "bad-term cancellation", criterion_4()),
        (5, "modified-energy scaling", c5),
        (6, "identity probes", c6),
        (7, "cutoff refinement", criterion_7()),
        (8, "small-data trapping", criterion_8()),
        (9, "fractional inequalities", criterion_9()),
        (10, "cutoff operator suite", criterion_10()),
        (11, "Gronwall envelope", criterion_11()),
    ];
    let mut failed = 0;
    for (n, name, o) in &results {
        println!("criterion {n:>2} [{}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} passed, {failed} failed ({:.1} s)", results.len() - failed, start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
