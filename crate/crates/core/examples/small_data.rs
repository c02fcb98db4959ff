//! Trapping threshold for small data and a long run that stays below it.

use gdnls::verify::trapping::{small_data_probe, SmallDataConfig};

fn main() -> gdnls::Result<()> {
    let r = small_data_probe(&SmallDataConfig::default())?;
    for k in ["c_est", "m", "delta", "sup_h1", "h1_growth_max"] {
        println!("{k:<14} {:.4}", r.constant(k).unwrap());
    }
    println!("verdict: {}", r.verdict);
    Ok(())
}
