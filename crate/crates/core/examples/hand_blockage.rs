//! Hand-case workflow on synthetic data: the 28 GHz hand preset scans only
//! the major polarization, and a blockage mask shadows part of the scan
//! plane. Compares the coverage percentiles of the three variants.
//!
//! `cargo run --release --example hand_blockage`

use std::sync::Arc;

use num_complex::Complex64;
use nf2ff::synthesis::{spherical_coverage, CoverageResult, PortPatternSet};
use nf2ff::synthetic::{
    apply_blockage, linear_array_ports, sample_near_field, table1_preset, Band, BlockageMask, Scenario,
};
use nf2ff::transform::{equivalent_currents, KernelForm, RadiationKernel};
use nf2ff::{make_spherical_grid, wavenumber, NearFieldScan};

fn coverage(kernel: &RadiationKernel, scans: &[NearFieldScan]) -> nf2ff::Result<CoverageResult> {
    let currents: Vec<_> = scans.iter().map(equivalent_currents).collect();
    Ok(spherical_coverage(&PortPatternSet::new(kernel.transform_many(&currents)?)?))
}

fn main() -> nf2ff::Result<()> {
    let preset = table1_preset(Band::Ghz28, Scenario::WithHand);
    let g = preset.geometry;
    // y-oriented magnetic elements radiate E_x on the scan plane, the
    // major component of this preset
    let ports = linear_array_ports(4, preset.wavelength() / 2.0, Some(20.0))?;

    let full = ports
        .iter()
        .map(|p| sample_near_field(p, &g, preset.frequency))
        .collect::<nf2ff::Result<Vec<_>>>()?;
    let major: Vec<_> = full.iter().map(|s| s.major_only(preset.polarization_mode)).collect();
    let mask = BlockageMask::ones(g).with_rect("palm", (-0.1, 0.1), (-0.1, -0.03), Complex64::new(0.05, 0.0))?;
    let blocked = major
        .iter()
        .map(|s| apply_blockage(s, &mask))
        .collect::<nf2ff::Result<Vec<_>>>()?;

    let grid = Arc::new(make_spherical_grid(2000, preset.theta_max)?);
    let kernel = RadiationKernel::new(g, grid, 2.0, wavenumber(preset.frequency)?, KernelForm::Printed)?;
    let runs = [
        ("both components", coverage(&kernel, &full)?),
        ("major only", coverage(&kernel, &major)?),
        ("major only + palm", coverage(&kernel, &blocked)?),
    ];
    println!("{:<20} {:>9} {:>9} {:>9}", "", "p=0.1", "p=0.5", "p=0.9");
    for (name, c) in &runs {
        println!(
            "{name:<20} {:9.3} {:9.3} {:9.3}",
            c.percentile_dbi(0.1)?,
            c.percentile_dbi(0.5)?,
            c.percentile_dbi(0.9)?
        );
    }
    Ok(())
}
