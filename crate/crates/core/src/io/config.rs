//! Run configuration (TOML).
//!
//! ```toml
//! preset = "28_free_space"      # or give frequency_hz and [geometry]
//! grid_count = 4000
//! theta_max_deg = 60.0
//! far_radius_m = 2.0
//! kernel = "printed"            # or "normalized"
//! output_dir = "out"            # default: $NF2FF_OUTPUT_DIR, then "."
//! major_polarization = "major_x_only"   # optional
//!
//! [calibration]
//! mode = "estimate"             # "none", "file" or "estimate"
//! file = "cal.toml"             # mode = "file"
//! region_db = 3.0
//! averaging = "complex_ratio"   # or "db_difference"
//!
//! [[port]]
//! label = "port1"
//! scan = "scans/port1.scan"     # measured scan; optional when sources are given
//! reference = "ref/port1.ff"    # optional reference far field
//! [[port.source]]
//! position_m = [0.0, 0.0, 0.0]
//! moment = [1.0, 0.0]
//! orientation = "y"
//!
//! [[mask]]                      # blockage applied to simulated scans
//! name = "finger strip"
//! x_m = [-0.01, 0.01]
//! y_m = [-0.1, 0.1]
//! transmission = [0.1, 0.0]
//! ```
//!
//! Relative paths are resolved against the directory of the config file.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Deserialize;

use crate::calibration::Averaging;
use crate::error::{Error, Result};
use crate::fields::{PolarizationMode, ScanGeometry};
use crate::synthetic::{table1_preset, Band, Orientation, PointSource, Scenario, ScanPreset};
use crate::transform::{KernelForm, DEFAULT_FAR_RADIUS};

/// Environment variable holding the default output directory.
pub const OUTPUT_DIR_ENV: &str = "NF2FF_OUTPUT_DIR";

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    preset: Option<String>,
    frequency_hz: Option<f64>,
    geometry: Option<RawGeometry>,
    #[serde(default = "default_count")]
    grid_count: usize,
    theta_max_deg: Option<f64>,
    #[serde(default = "default_radius")]
    far_radius_m: f64,
    #[serde(default)]
    kernel: Option<String>,
    output_dir: Option<PathBuf>,
    major_polarization: Option<String>,
    #[serde(default)]
    calibration: RawCalibration,
    #[serde(default)]
    port: Vec<RawPort>,
    #[serde(default)]
    mask: Vec<MaskRect>,
}

fn default_count() -> usize {
    4000
}

fn default_radius() -> f64 {
    DEFAULT_FAR_RADIUS
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGeometry {
    n_x: usize,
    n_y: usize,
    dx_m: f64,
    dy_m: f64,
    d_m: f64,
    #[serde(default)]
    offset_m: [f64; 2],
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCalibration {
    mode: Option<String>,
    file: Option<PathBuf>,
    region_db: Option<f64>,
    averaging: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPort {
    label: String,
    scan: Option<PathBuf>,
    reference: Option<PathBuf>,
    #[serde(default)]
    source: Vec<SourceConfig>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceConfig {
    pub position_m: [f64; 3],
    pub moment: [f64; 2],
    pub orientation: String,
}

impl SourceConfig {
    pub fn to_source(&self) -> Result<PointSource> {
        let orientation = match self.orientation.as_str() {
            "x" | "X" => Orientation::X,
            "y" | "Y" => Orientation::Y,
            other => return Err(Error::Config(format!("unknown source orientation `{other}`"))),
        };
        PointSource::new(self.position_m, Complex64::new(self.moment[0], self.moment[1]), orientation)
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaskRect {
    pub name: String,
    pub x_m: [f64; 2],
    pub y_m: [f64; 2],
    pub transmission: [f64; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub struct PortConfig {
    pub label: String,
    pub scan: Option<PathBuf>,
    pub reference: Option<PathBuf>,
    pub sources: Vec<PointSource>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CalibrationMode {
    None,
    File,
    Estimate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationConfig {
    pub mode: CalibrationMode,
    pub file: Option<PathBuf>,
    pub region_db: f64,
    pub averaging: Averaging,
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub preset: Option<ScanPreset>,
    pub frequency: f64,
    /// Scan geometry used when simulating; measured scans carry their own.
    pub geometry: Option<ScanGeometry>,
    pub grid_count: usize,
    pub theta_max: f64,
    pub far_radius: f64,
    pub kernel: KernelForm,
    pub output_dir: PathBuf,
    pub major_polarization: Option<PolarizationMode>,
    pub calibration: CalibrationConfig,
    pub ports: Vec<PortConfig>,
    pub mask: Vec<MaskRect>,
}

pub fn parse_preset_name(name: &str) -> Result<ScanPreset> {
    let (band, scenario) = name
        .split_once('_')
        .ok_or_else(|| Error::Config(format!("preset `{name}` is not `<band>_<scenario>`")))?;
    let band = match band {
        "28" => Band::Ghz28,
        "39" => Band::Ghz39,
        other => return Err(Error::Config(format!("unknown band `{other}`, expected 28 or 39"))),
    };
    let scenario = match scenario {
        "free_space" => Scenario::FreeSpace,
        "with_hand" => Scenario::WithHand,
        other => {
            return Err(Error::Config(format!(
                "unknown scenario `{other}`, expected free_space or with_hand"
            )))
        }
    };
    Ok(table1_preset(band, scenario))
}

impl RunConfig {
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| {
            let line = e
                .span()
                .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1)
                .unwrap_or(1);
            Error::parse(line, e.message().to_string())
        })?;
        let resolve = |p: PathBuf| if p.is_absolute() { p } else { base_dir.join(p) };

        let preset = raw.preset.as_deref().map(parse_preset_name).transpose()?;
        let frequency = match (raw.frequency_hz, &preset) {
            (Some(f), _) => f,
            (None, Some(p)) => p.frequency,
            (None, None) => return Err(Error::Config("need `frequency_hz` or `preset`".into())),
        };
        crate::fields::wavenumber(frequency)?;
        let geometry = match (raw.geometry, &preset) {
            (Some(g), _) => Some(ScanGeometry::new(g.n_x, g.n_y, g.dx_m, g.dy_m, g.d_m)?.with_offset(g.offset_m[0], g.offset_m[1])),
            (None, Some(p)) => Some(p.geometry),
            (None, None) => None,
        };
        if raw.grid_count == 0 {
            return Err(Error::Config("grid_count must be at least 1".into()));
        }
        let theta_max = match (raw.theta_max_deg, &preset) {
            (Some(t), _) => t.to_radians(),
            (None, Some(p)) => p.theta_max,
            (None, None) => crate::grid::DEFAULT_THETA_MAX,
        };
        let kernel = match raw.kernel.as_deref() {
            None | Some("printed") => KernelForm::Printed,
            Some("normalized") => KernelForm::Normalized,
            Some(other) => return Err(Error::Config(format!("unknown kernel `{other}`"))),
        };
        let output_dir = raw
            .output_dir
            .map(resolve)
            .or_else(|| std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."));
        let major_polarization = raw
            .major_polarization
            .as_deref()
            .map(str::parse::<PolarizationMode>)
            .transpose()?;

        let c = raw.calibration;
        let mode = match c.mode.as_deref() {
            None | Some("none") => CalibrationMode::None,
            Some("file") => CalibrationMode::File,
            Some("estimate") => CalibrationMode::Estimate,
            Some(other) => return Err(Error::Config(format!("unknown calibration mode `{other}`"))),
        };
        let averaging = match c.averaging.as_deref() {
            None | Some("complex_ratio") => Averaging::ComplexRatio,
            Some("db_difference") => Averaging::DbDifference,
            Some(other) => return Err(Error::Config(format!("unknown averaging `{other}`"))),
        };
        let calibration = CalibrationConfig {
            mode,
            file: c.file.map(resolve),
            region_db: c.region_db.unwrap_or(3.0),
            averaging,
        };
        if mode == CalibrationMode::File && calibration.file.is_none() {
            return Err(Error::Config("calibration mode `file` needs `file`".into()));
        }

        let ports = raw
            .port
            .into_iter()
            .map(|p| {
                Ok(PortConfig {
                    label: p.label,
                    scan: p.scan.map(resolve),
                    reference: p.reference.map(resolve),
                    sources: p.source.iter().map(SourceConfig::to_source).collect::<Result<_>>()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if ports.is_empty() {
            return Err(Error::Config("config lists no ports".into()));
        }
        for (i, p) in ports.iter().enumerate() {
            if ports[..i].iter().any(|q| q.label == p.label) {
                return Err(Error::Config(format!("duplicate port label `{}`", p.label)));
            }
        }

        Ok(Self {
            preset,
            frequency,
            geometry,
            grid_count: raw.grid_count,
            theta_max,
            far_radius: raw.far_radius_m,
            kernel,
            output_dir,
            major_polarization,
            calibration,
            ports,
            mask: raw.mask,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base).map_err(|e| e.with_path(path))
    }

    /// Check that every input file the `run` pipeline reads exists.
    pub fn check_inputs(&self) -> Result<()> {
        for p in &self.ports {
            match (&p.scan, p.sources.is_empty()) {
                (Some(s), _) if !s.exists() => {
                    return Err(Error::Config(format!("scan file {} does not exist", s.display())))
                }
                (None, true) => {
                    return Err(Error::Config(format!("port `{}` has neither a scan nor sources", p.label)))
                }
                _ => {}
            }
            if let Some(r) = &p.reference {
                if !r.exists() {
                    return Err(Error::Config(format!("reference file {} does not exist", r.display())));
                }
            }
        }
        if let Some(f) = &self.calibration.file {
            if self.calibration.mode == CalibrationMode::File && !f.exists() {
                return Err(Error::Config(format!("calibration file {} does not exist", f.display())));
            }
        }
        Ok(())
    }
}
