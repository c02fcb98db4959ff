use gdnls::cli::RunConfig;
use gdnls::spectral::checkpoint::{from_json, to_json};
use gdnls::spectral::cutoff::CutoffSpec;
use gdnls::spectral::field::SpectralField;
use gdnls::spectral::grid::GridSpec;
use gdnls::spectral::norms::sobolev_norm;
use gdnls::spectral::random::random_band_field;
use gdnls::verify::timederiv::fd_derivative;
use proptest::prelude::*;

fn field(seed: u64, band: usize) -> SpectralField {
    random_band_field(GridSpec::new(32, 4).unwrap(), seed, band, 2.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cutoff_is_idempotent(seed in any::<u64>(), band in 1usize..32, k in 2usize..32) {
        let f = field(seed, band);
        let c = CutoffSpec::from_max_mode(k).unwrap();
        let once = c.apply(&f);
        let twice = c.apply(&once);
        prop_assert!((&twice - &once).l2_norm() == 0.0);
    }

    #[test]
    fn cutoff_contracts_every_sobolev_norm(seed in any::<u64>(), k in 2usize..32, s in 0.0f64..3.0) {
        let f = field(seed, 32);
        let c = CutoffSpec::from_max_mode(k).unwrap();
        prop_assert!(sobolev_norm(&c.apply(&f), s) <= sobolev_norm(&f, s) * (1.0 + 1e-14));
    }

    #[test]
    fn sobolev_norms_are_ordered(seed in any::<u64>(), s in 0.0f64..2.0, ds in 0.0f64..1.0) {
        let f = field(seed, 16);
        prop_assert!(sobolev_norm(&f, s) <= sobolev_norm(&f, s + ds) * (1.0 + 1e-14));
    }

    #[test]
    fn parseval_holds_on_the_grid(seed in any::<u64>()) {
        let f = field(seed, 16);
        let x = f.to_physical();
        let mean: f64 = x.iter().map(|z| z.norm_sqr()).sum::<f64>() / x.len() as f64;
        prop_assert!((mean - f.l2_norm_sqr()).abs() <= 1e-12 * f.l2_norm_sqr().max(1e-300));
    }

    #[test]
    fn fd_derivative_is_exact_on_quartics(c in prop::array::uniform5(-3.0f64..3.0), h in 0.01f64..0.2) {
        let p = |t: f64| c[0] + c[1] * t + c[2] * t * t + c[3] * t.powi(3) + c[4] * t.powi(4);
        let dp = |t: f64| c[1] + 2.0 * c[2] * t + 3.0 * c[3] * t * t + 4.0 * c[4] * t.powi(3);
        let vals: Vec<f64> = (0..9).map(|i| p(i as f64 * h)).collect();
        let d = fd_derivative(&vals, h).unwrap();
        for (i, di) in d.iter().enumerate() {
            prop_assert!((di - dp(i as f64 * h)).abs() < 1e-8, "index {i}: {di} vs {}", dp(i as f64 * h));
        }
    }

    #[test]
    fn checkpoint_round_trip_is_exact(seed in any::<u64>()) {
        let f = field(seed, 24);
        let g = from_json(&to_json(&f).unwrap(), 4).unwrap();
        prop_assert_eq!(f.coeffs(), g.coeffs());
    }

    #[test]
    fn config_round_trip_is_idempotent(sigma in 1.01f64..4.0, k in 2u32..6, seed in any::<u32>()) {
        let overrides = vec![
            format!("sigma={sigma}"),
            format!("epsilon={}", 1.0 / f64::from(1u32 << k)),
            format!("seed={seed}"),
        ];
        let cfg = RunConfig::load(None, &overrides).unwrap();
        let text = cfg.to_toml().unwrap();
        let back = RunConfig::from_toml(&text).unwrap();
        prop_assert_eq!(&back, &cfg);
        prop_assert_eq!(back.to_toml().unwrap(), text);
    }
}
