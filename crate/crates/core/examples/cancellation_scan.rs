//! Fit the bad-term coefficients of dE/dt over the (alpha, beta) plane.

use gdnls::verify::cancellation::{cancellation_scan, CancellationConfig};

fn main() -> gdnls::Result<()> {
    for sigma in [1.5, 2.0, 3.0] {
        let scan = cancellation_scan(&CancellationConfig::canonical(sigma))?;
        let (c, o) = (scan.canonical, scan.origin);
        println!(
            "sigma {sigma}: canonical ({:.3}, {:.3}) -> ({:+.3}, {:+.3}); origin -> ({:+.3}, {:+.3}); {}",
            c.alpha, c.beta, c.b1_coef, c.b2_coef, o.b1_coef, o.b2_coef, scan.report.verdict
        );
    }
    Ok(())
}
