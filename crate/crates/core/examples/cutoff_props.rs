//! Projection, adjointness, smoothing and convergence of the Fourier cutoff.

use gdnls::verify::cutoff_props::{cutoff_props_probe, CutoffPropsConfig};

fn main() -> gdnls::Result<()> {
    let r = cutoff_props_probe(&CutoffPropsConfig::default())?;
    for (k, v) in &r.estimated_constants {
        println!("{k:<24} {v}");
    }
    println!("verdict: {}", r.verdict);
    Ok(())
}
