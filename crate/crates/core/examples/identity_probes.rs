//! Time-derivative identities for ||u_xx||^2 and the three correction integrals,
//! checked against finite differences along concentrating bumps.

use gdnls::verify::lemmas::{evaluate_family, identity_report, Identity, IdentityProbeConfig};

fn main() -> gdnls::Result<()> {
    let cfg = IdentityProbeConfig::default();
    let levels = cfg.family.scaling_levels(cfg.levels, cfg.level_ratio);
    let bumps: Vec<_> = levels.iter().enumerate().flat_map(|(j, l)| l.iter().map(move |b| (j, *b))).collect();
    let samples = evaluate_family(&cfg, &bumps)?;
    for id in [Identity::H2Seminorm, Identity::Correction1, Identity::Correction2, Identity::Correction3, Identity::ModifiedEnergy] {
        let r = identity_report(id, &cfg, &samples);
        println!("{:<10} {}  max residual {:.3e}", r.probe_id, r.verdict, r.residual_stats.max);
    }
    Ok(())
}
