//! List the scan presets and run the sampling checks on each.
//!
//! `cargo run --example scan_presets`

use nf2ff::setup::validate_setup;
use nf2ff::synthetic::all_presets;

fn main() -> nf2ff::Result<()> {
    for p in all_presets() {
        let g = p.geometry;
        let lambda = p.wavelength();
        let report = validate_setup(&g, p.frequency, p.theta_max)?;
        println!(
            "{:<14} d = {:.0} mm ({:.2} λ)  Δ = {:.0} mm ({:.3} λ)  N = {}  {} min",
            p.name(),
            g.d() * 1e3,
            g.d() / lambda,
            g.dx() * 1e3,
            g.dx() / lambda,
            g.len(),
            p.measurement_minutes
        );
        println!("    truncation half-angle {:.1}°", report.truncation_half_angle.to_degrees());
        for w in &report.warnings {
            println!("    warning: {w}");
        }
    }
    Ok(())
}
