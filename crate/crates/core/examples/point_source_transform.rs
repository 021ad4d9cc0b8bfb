//! Sample one magnetic dipole on the 28 GHz free-space scan plane,
//! transform, and compare with the closed-form far field along φ = 0.
//!
//! `cargo run --release --example point_source_transform`

use std::sync::Arc;

use num_complex::Complex64;
use nf2ff::synthesis::elevation_cut;
use nf2ff::synthetic::{analytic_far_field, sample_near_field, table1_preset, Band, Orientation, PointSource, Scenario};
use nf2ff::transform::{transform_scan, KernelForm, DEFAULT_FAR_RADIUS};
use nf2ff::make_spherical_grid;

fn main() -> nf2ff::Result<()> {
    let preset = table1_preset(Band::Ghz28, Scenario::FreeSpace);
    let source = [PointSource::new([0.0; 3], Complex64::new(1.0, 0.0), Orientation::Y)?];
    let scan = sample_near_field(&source, &preset.geometry, preset.frequency)?;

    let grid = Arc::new(make_spherical_grid(2000, preset.theta_max)?);
    let r = DEFAULT_FAR_RADIUS;
    let far = transform_scan(&scan, grid.clone(), r, KernelForm::Printed)?;
    let exact = analytic_far_field("exact", &source, grid, r, preset.frequency)?;

    println!("{:>8} {:>12} {:>12} {:>8}", "θ (deg)", "NF2FF dBi", "exact dBi", "Δ dB");
    for (a, b) in elevation_cut(&far, 0.0).iter().zip(elevation_cut(&exact, 0.0)) {
        println!(
            "{:8.2} {:12.3} {:12.3} {:8.3}",
            a.theta.to_degrees(),
            a.gain_dbi,
            b.gain_dbi,
            a.gain_dbi - b.gain_dbi
        );
    }
    Ok(())
}
