//! Embed the lab's per-port losses into synthetic patterns and estimate
//! them back from the main beam.
//!
//! `cargo run --release --example loss_deembedding`

use std::sync::Arc;

use nf2ff::calibration::{apply_calibration, estimate_loss, fixtures, Averaging, CalibrationDirection, Region};
use nf2ff::synthetic::{analytic_far_field, linear_array_ports};
use nf2ff::{make_spherical_grid, wavelength};

fn main() -> nf2ff::Result<()> {
    for ghz in [28u32, 39] {
        let f = ghz as f64 * 1e9;
        let table = fixtures::table(ghz).expect("both bands have fixtures");
        let ports = linear_array_ports(table.len(), wavelength(f)? / 2.0, None)?;
        let grid = Arc::new(make_spherical_grid(2000, 60f64.to_radians())?);

        println!("{ghz} GHz");
        for (cal, sources) in table.iter().zip(&ports) {
            let reference = analytic_far_field("sim", sources, grid.clone(), 2.0, f)?;
            let mut measured = apply_calibration(&reference, cal, CalibrationDirection::Embed)?;
            measured.label = cal.label.clone();
            let est = estimate_loss(&measured, &reference, &Region::default(), Averaging::ComplexRatio)?;
            println!(
                "  {}: embedded {:5.1} dB, estimated {:8.4} dB over {} directions",
                cal.label, cal.loss_db, est.calibration.loss_db, est.used
            );
        }
    }
    Ok(())
}
