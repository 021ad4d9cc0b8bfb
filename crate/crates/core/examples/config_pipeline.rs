//! Drive the file-based pipeline from a run config: simulate scans for a
//! four-port array, then run transform, loss estimation and coverage.
//!
//! `cargo run --release --example config_pipeline -- out/`

use std::path::PathBuf;

use nf2ff::io::RunConfig;
use nf2ff::pipeline;

const CONFIG: &str = r#"
preset = "28_free_space"
grid_count = 2000
output_dir = "results"

[calibration]
mode = "estimate"
region_db = 3.0

[[port]]
label = "port1"
[[port.source]]
position_m = [-0.0080, 0.0, 0.0]
moment = [1.0, 0.0]
orientation = "y"

[[port]]
label = "port2"
[[port.source]]
position_m = [-0.0027, 0.0, 0.0]
moment = [1.0, 0.0]
orientation = "y"

[[port]]
label = "port3"
[[port.source]]
position_m = [0.0027, 0.0, 0.0]
moment = [1.0, 0.0]
orientation = "y"

[[port]]
label = "port4"
[[port.source]]
position_m = [0.0080, 0.0, 0.0]
moment = [1.0, 0.0]
orientation = "y"
"#;

fn main() -> nf2ff::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("nf2ff_config_pipeline"));
    std::fs::create_dir_all(&dir)?;
    let cfg = RunConfig::parse(CONFIG, &dir)?;

    let simulated = pipeline::simulate(&cfg)?;
    println!("simulated {} files", simulated.len());

    let outcome = pipeline::run(&cfg)?;
    for c in &outcome.calibrations {
        println!("{}: {:+.4} dB vs reference", c.label, c.loss_db);
    }
    println!("median coverage gain {:.3} dBi", outcome.coverage.percentile_dbi(0.5)?);
    for p in &outcome.written {
        println!("  {}", p.display());
    }
    Ok(())
}
