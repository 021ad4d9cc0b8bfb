use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use log::{error, info};

use nf2ff::calibration::{Averaging, Region};
use nf2ff::io::{self, parse_preset_name, RunConfig, OUTPUT_DIR_ENV};
use nf2ff::pipeline::{self, TransformOptions};
use nf2ff::setup::validate_setup;
use nf2ff::synthetic::all_presets;
use nf2ff::transform::{KernelForm, DEFAULT_FAR_RADIUS};
use nf2ff::ScanGeometry;

#[derive(Parser)]
#[command(name = "nf2ff", version, about = "Planar near-field to far-field processing and coverage statistics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kernel {
    Printed,
    Normalized,
}

#[derive(Clone, Copy, ValueEnum)]
enum AveragingArg {
    ComplexRatio,
    DbDifference,
}

#[derive(clap::Args)]
struct GridArgs {
    /// Requested number of far-field directions.
    #[arg(long, default_value_t = 4000)]
    grid_count: usize,
    #[arg(long, default_value_t = 60.0)]
    theta_max_deg: f64,
    #[arg(long, default_value_t = DEFAULT_FAR_RADIUS)]
    far_radius_m: f64,
    #[arg(long, value_enum, default_value_t = Kernel::Printed)]
    kernel: Kernel,
}

impl GridArgs {
    fn options(&self) -> TransformOptions {
        TransformOptions {
            grid_count: self.grid_count,
            theta_max: self.theta_max_deg.to_radians(),
            far_radius: self.far_radius_m,
            kernel: match self.kernel {
                Kernel::Printed => KernelForm::Printed,
                Kernel::Normalized => KernelForm::Normalized,
            },
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the scan presets (all, or one band and scenario).
    Preset {
        /// 28 or 39
        band: Option<String>,
        /// free_space or with_hand
        scenario: Option<String>,
    },
    /// Check a scan file or preset against the sampling rules.
    Validate {
        scan: Option<PathBuf>,
        /// Band and scenario, e.g. `--preset 28 free_space`.
        #[arg(long, num_args = 2, value_names = ["BAND", "SCENARIO"], conflicts_with = "scan")]
        preset: Option<Vec<String>>,
        /// Override the sampling step (both axes).
        #[arg(long)]
        step_m: Option<f64>,
        /// Override the standoff distance.
        #[arg(long)]
        d_m: Option<f64>,
        #[arg(long, default_value_t = 60.0)]
        theta_max_deg: f64,
    },
    /// Transform scan files into far-field files.
    Transform {
        #[arg(required = true)]
        scans: Vec<PathBuf>,
        /// Output file; only with a single scan.
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Combine far-field files and write gain_map.csv and cdf.csv.
    Coverage {
        #[arg(required = true)]
        patterns: Vec<PathBuf>,
        /// De-embed with this calibration file first.
        #[arg(long)]
        calibration: Option<PathBuf>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Estimate per-port losses from measured and reference far fields.
    Calibrate {
        #[arg(long, required = true)]
        measured: Vec<PathBuf>,
        #[arg(long, required = true)]
        reference: Vec<PathBuf>,
        #[arg(short, long)]
        out: PathBuf,
        /// Main-beam contour used for averaging.
        #[arg(long, default_value_t = 3.0)]
        region_db: f64,
        #[arg(long, value_enum, default_value_t = AveragingArg::ComplexRatio)]
        averaging: AveragingArg,
    },
    /// Write synthetic scans and analytic reference patterns from a config.
    Simulate { config: PathBuf },
    /// Run the whole chain from a config.
    Run { config: PathBuf },
}

enum Failure {
    Validation,
    Error(nf2ff::Error),
}

impl From<nf2ff::Error> for Failure {
    fn from(e: nf2ff::Error) -> Self {
        Failure::Error(e)
    }
}

fn default_out_dir(arg: Option<PathBuf>) -> PathBuf {
    arg.or_else(|| std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn preset_label(band: &str, scenario: &str) -> String {
    format!("{band}_{scenario}")
}

fn print_preset(p: &nf2ff::synthetic::ScanPreset) {
    let g = p.geometry;
    println!(
        "{:<14} f={:.0} GHz  d={:.0} mm  Δ={:.0} mm  L={:.0} mm  N={}x{}  polarization={}  θmax={:.0}°",
        p.name(),
        p.frequency / 1e9,
        g.d() * 1e3,
        g.dx() * 1e3,
        p.extent * 1e3,
        g.n_x(),
        g.n_y(),
        p.polarization_mode,
        p.theta_max.to_degrees()
    );
}

fn execute(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Preset { band, scenario } => match (band, scenario) {
            (Some(b), Some(s)) => print_preset(&parse_preset_name(&preset_label(&b, &s))?),
            (Some(b), None) => {
                let found: Vec<_> = all_presets().into_iter().filter(|p| p.name().starts_with(&format!("{b}_"))).collect();
                if found.is_empty() {
                    return Err(nf2ff::Error::Config(format!("no presets for band `{b}`")).into());
                }
                found.iter().for_each(print_preset);
            }
            _ => all_presets().iter().for_each(print_preset),
        },
        Command::Validate {
            scan,
            preset,
            step_m,
            d_m,
            theta_max_deg,
        } => {
            let (geometry, frequency) = match (scan, preset) {
                (Some(path), _) => {
                    let s = io::read_scan(&path)?.scan;
                    (*s.geometry(), s.frequency())
                }
                (None, Some(p)) => {
                    let preset = parse_preset_name(&preset_label(&p[0], &p[1]))?;
                    (preset.geometry, preset.frequency)
                }
                (None, None) => {
                    return Err(nf2ff::Error::Config("give a scan file or --preset BAND SCENARIO".into()).into())
                }
            };
            let geometry = if step_m.is_some() || d_m.is_some() {
                let step = step_m.unwrap_or(geometry.dx());
                let extent = geometry.dx() * (geometry.n_x() - 1) as f64;
                let n = (extent / step).round() as usize + 1;
                ScanGeometry::new(n, n, step, step, d_m.unwrap_or(geometry.d()))?
            } else {
                geometry
            };
            let report = validate_setup(&geometry, frequency, theta_max_deg.to_radians())?;
            println!(
                "λ = {:.3} mm, d = {:.3} λ, Δx = {:.3} λ, truncation half-angle = {:.1}°",
                report.wavelength * 1e3,
                geometry.d() / report.wavelength,
                geometry.dx() / report.wavelength,
                report.truncation_half_angle.to_degrees()
            );
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            println!("{} warning(s)", report.warnings.len());
            if report.has_hard_violation() {
                return Err(Failure::Validation);
            }
        }
        Command::Transform {
            scans,
            out,
            out_dir,
            grid,
        } => {
            let opts = grid.options();
            match out {
                Some(out) => {
                    if scans.len() != 1 {
                        return Err(nf2ff::Error::Config("--out takes a single scan; use --out-dir".into()).into());
                    }
                    let scan = io::read_scan(&scans[0])?.scan;
                    let p = pipeline::transform_scans(&[scan], opts.grid()?, opts.far_radius, opts.kernel)?;
                    io::write_far_field(&p[0], &out)?;
                    info!("wrote {}", out.display());
                }
                None => {
                    for p in pipeline::transform_files(&scans, &opts, &default_out_dir(out_dir))? {
                        info!("wrote {}", p.display());
                    }
                }
            }
        }
        Command::Coverage {
            patterns,
            calibration,
            out_dir,
        } => {
            let result = pipeline::coverage_files(&patterns, calibration.as_deref())?;
            let dir = default_out_dir(out_dir);
            std::fs::create_dir_all(&dir).map_err(nf2ff::Error::from)?;
            io::write_gain_map_csv(&result, dir.join("gain_map.csv"))?;
            io::write_cdf_csv(&result, dir.join("cdf.csv"))?;
            for p in [0.1, 0.5, 0.9] {
                println!("p = {p:.1}: {:.3} dBi", result.percentile_dbi(p)?);
            }
        }
        Command::Calibrate {
            measured,
            reference,
            out,
            region_db,
            averaging,
        } => {
            if measured.len() != reference.len() {
                return Err(nf2ff::Error::Config(format!(
                    "{} measured patterns but {} references",
                    measured.len(),
                    reference.len()
                ))
                .into());
            }
            let pairs = measured
                .iter()
                .zip(&reference)
                .map(|(m, r)| Ok((io::read_far_field(m)?, io::read_far_field(r)?)))
                .collect::<nf2ff::Result<Vec<_>>>()?;
            let averaging = match averaging {
                AveragingArg::ComplexRatio => Averaging::ComplexRatio,
                AveragingArg::DbDifference => Averaging::DbDifference,
            };
            let est = pipeline::calibrate_patterns(&pairs, &Region::MainBeam { within_db: region_db }, averaging)?;
            for e in &est {
                let c = &e.calibration;
                println!("{}: {:.4} dB, {:.6} rad ({} directions)", c.label, c.loss_db, c.phase_rad, e.used);
            }
            let cals: Vec<_> = est.into_iter().map(|e| e.calibration).collect();
            io::write_calibrations(&cals, &out)?;
        }
        Command::Simulate { config } => {
            let cfg = RunConfig::load(&config)?;
            for p in pipeline::simulate(&cfg)? {
                info!("wrote {}", p.display());
            }
        }
        Command::Run { config } => {
            let cfg = RunConfig::load(&config)?;
            let outcome = pipeline::run(&cfg)?;
            for c in &outcome.calibrations {
                println!("{}: {:.4} dB", c.label, c.loss_db);
            }
            for p in [0.1, 0.5, 0.9] {
                println!("p = {p:.1}: {:.3} dBi", outcome.coverage.percentile_dbi(p)?);
            }
            info!("outputs in {}", cfg.output_dir.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation) => {
            error!("setup violates the sampling rules");
            ExitCode::from(1)
        }
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
