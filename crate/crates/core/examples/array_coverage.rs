//! Four-port λ/2 array: transform every port, combine with equal gain and
//! print the spherical-coverage percentiles. CSVs go to the directory given
//! as the first argument (default: a temporary directory).
//!
//! `cargo run --release --example array_coverage -- out/`

use std::path::PathBuf;
use std::sync::Arc;

use nf2ff::io::{write_cdf_csv, write_gain_map_csv};
use nf2ff::synthesis::{spherical_coverage, PortPatternSet};
use nf2ff::synthetic::{linear_array_ports, sample_near_field, table1_preset, Band, Scenario};
use nf2ff::transform::{equivalent_currents, KernelForm, RadiationKernel, DEFAULT_FAR_RADIUS};
use nf2ff::{make_spherical_grid, wavenumber};

fn main() -> nf2ff::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("nf2ff_array_coverage"));
    std::fs::create_dir_all(&out)?;

    let preset = table1_preset(Band::Ghz28, Scenario::FreeSpace);
    let ports = linear_array_ports(4, preset.wavelength() / 2.0, None)?;
    let currents = ports
        .iter()
        .enumerate()
        .map(|(m, s)| {
            let scan = sample_near_field(s, &preset.geometry, preset.frequency)?.with_label(format!("port{}", m + 1));
            Ok(equivalent_currents(&scan))
        })
        .collect::<nf2ff::Result<Vec<_>>>()?;

    let grid = Arc::new(make_spherical_grid(4000, preset.theta_max)?);
    let kernel = RadiationKernel::new(
        preset.geometry,
        grid,
        DEFAULT_FAR_RADIUS,
        wavenumber(preset.frequency)?,
        KernelForm::Printed,
    )?;
    let patterns = kernel.transform_many(&currents)?;
    let coverage = spherical_coverage(&PortPatternSet::new(patterns)?);

    for p in [0.1, 0.5, 0.9, 1.0] {
        println!("CDF {p:.1}: {:7.3} dBi", coverage.percentile_dbi(p)?);
    }
    write_gain_map_csv(&coverage, out.join("gain_map.csv"))?;
    write_cdf_csv(&coverage, out.join("cdf.csv"))?;
    println!("wrote gain_map.csv and cdf.csv to {}", out.display());
    Ok(())
}
