//! Sampled constants for the fractional commutator, chain rule and
//! Gagliardo-seminorm equivalence, plus the H^s growth rate.

use gdnls::verify::growth::{hs_growth_probe, HsGrowthConfig};
use gdnls::verify::inequalities::{chain_rule_probe, commutator_probe, gagliardo_probe, good_term_probe, SamplingConfig};

fn main() -> gdnls::Result<()> {
    let cfg = SamplingConfig { samples: 200, ..SamplingConfig::default() };
    let reports = [
        commutator_probe(&cfg, 1.75, 0.75)?,
        chain_rule_probe(&cfg, 1.6, 1.5)?,
        gagliardo_probe(&cfg, 0.5)?,
        good_term_probe(&cfg, 2.0, 1e-12)?,
        hs_growth_probe(&HsGrowthConfig::default())?,
    ];
    for r in &reports {
        println!("{:<12} {}", r.probe_id, r.verdict);
        for (k, v) in &r.estimated_constants {
            println!("    {k:<22} {v:.4e}");
        }
    }
    Ok(())
}
