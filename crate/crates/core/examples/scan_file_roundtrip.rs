//! Write a synthetic scan in the text scan format and read it back.
//!
//! `cargo run --example scan_file_roundtrip -- port1.scan`

use std::path::PathBuf;

use num_complex::Complex64;
use nf2ff::io::{read_scan, write_scan, ScanFile};
use nf2ff::synthetic::{sample_near_field, table1_preset, Band, Orientation, PointSource, Scenario};

fn main() -> nf2ff::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("nf2ff_port1.scan"));
    let preset = table1_preset(Band::Ghz39, Scenario::FreeSpace);
    let src = [PointSource::new([0.002, 0.0, 0.0], Complex64::new(0.0, 1.0), Orientation::Y)?];
    let scan = sample_near_field(&src, &preset.geometry, preset.frequency)?.with_label("port1");

    let mut file = ScanFile::new(scan);
    file.extra.push(("operator".into(), "example".into()));
    write_scan(&file, &path)?;
    let back = read_scan(&path)?;
    println!(
        "{}: {} samples, label `{}`, extras {:?}, identical: {}",
        path.display(),
        back.scan.e_x().len(),
        back.scan.label(),
        back.extra,
        back == file
    );
    Ok(())
}
