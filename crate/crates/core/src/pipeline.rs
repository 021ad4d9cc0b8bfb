//! File-level building blocks and the end-to-end run used by the binary.
//!
//! Every stage reads and writes the formats in [`crate::io`], so the stages
//! can be run one at a time and give the same result as [`run`].

use std::path::{Path, PathBuf};
use std::sync::Arc;

use log::{info, warn};
use num_complex::Complex64;

use crate::calibration::{
    apply_calibration, estimate_loss, Averaging, CalibrationDirection, LossEstimate, PortCalibration, Region,
};
use crate::error::{Error, Result};
use crate::fields::{wavenumber, FarFieldPattern, NearFieldScan};
use crate::grid::{make_spherical_grid, SphericalGrid};
use crate::io::{self, CalibrationMode, RunConfig, ScanFile};
use crate::setup::validate_setup;
use crate::synthesis::{spherical_coverage, CoverageResult, PortPatternSet};
use crate::synthetic::{analytic_far_field, apply_blockage, sample_near_field, BlockageMask};
use crate::transform::{equivalent_currents, KernelForm, RadiationKernel, DEFAULT_FAR_RADIUS};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformOptions {
    pub grid_count: usize,
    pub theta_max: f64,
    pub far_radius: f64,
    pub kernel: KernelForm,
}

impl Default for TransformOptions {
    fn default() -> Self {
        Self {
            grid_count: 4000,
            theta_max: crate::grid::DEFAULT_THETA_MAX,
            far_radius: DEFAULT_FAR_RADIUS,
            kernel: KernelForm::Printed,
        }
    }
}

impl TransformOptions {
    pub fn from_config(cfg: &RunConfig) -> Self {
        Self {
            grid_count: cfg.grid_count,
            theta_max: cfg.theta_max,
            far_radius: cfg.far_radius,
            kernel: cfg.kernel,
        }
    }

    pub fn grid(&self) -> Result<Arc<SphericalGrid>> {
        Ok(Arc::new(make_spherical_grid(self.grid_count, self.theta_max)?))
    }
}

/// Transform scans onto one shared grid. Scans with the same geometry and
/// frequency share one kernel pass.
pub fn transform_scans(
    scans: &[NearFieldScan],
    grid: Arc<SphericalGrid>,
    far_radius: f64,
    kernel: KernelForm,
) -> Result<Vec<FarFieldPattern>> {
    let mut out: Vec<Option<FarFieldPattern>> = vec![None; scans.len()];
    let mut done = vec![false; scans.len()];
    for i in 0..scans.len() {
        if done[i] {
            continue;
        }
        let group: Vec<usize> = (i..scans.len())
            .filter(|&j| {
                !done[j]
                    && scans[j].geometry() == scans[i].geometry()
                    && scans[j].frequency() == scans[i].frequency()
            })
            .collect();
        let k0 = wavenumber(scans[i].frequency())?;
        let kern = RadiationKernel::new(*scans[i].geometry(), grid.clone(), far_radius, k0, kernel)?;
        let currents: Vec<_> = group.iter().map(|&j| equivalent_currents(&scans[j])).collect();
        for (j, p) in group.iter().zip(kern.transform_many(&currents)?) {
            out[*j] = Some(p);
            done[*j] = true;
        }
    }
    Ok(out.into_iter().map(|p| p.expect("every scan is in a group")).collect())
}

/// Read the scans, transform and write one far-field file per scan into
/// `out_dir` as `<label>.ff` (or the scan file stem when the label is
/// empty). Returns the written paths.
pub fn transform_files(scan_paths: &[PathBuf], opts: &TransformOptions, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let mut scans = Vec::with_capacity(scan_paths.len());
    for p in scan_paths {
        let mut s = io::read_scan(p)?.scan;
        if s.label().is_empty() {
            let stem = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            s = s.with_label(stem);
        }
        scans.push(s);
    }
    let patterns = transform_scans(&scans, opts.grid()?, opts.far_radius, opts.kernel)?;
    std::fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    for p in &patterns {
        let path = out_dir.join(format!("{}.ff", p.label));
        io::write_far_field(p, &path)?;
        written.push(path);
    }
    Ok(written)
}

/// Pair each pattern with its calibration by label and de-embed.
pub fn deembed_all(patterns: &[FarFieldPattern], cals: &[PortCalibration]) -> Result<Vec<FarFieldPattern>> {
    patterns
        .iter()
        .map(|p| {
            let cal = cals
                .iter()
                .find(|c| c.label == p.label)
                .ok_or_else(|| Error::Config(format!("no calibration for port `{}`", p.label)))?;
            apply_calibration(p, cal, CalibrationDirection::Deembed)
        })
        .collect()
}

/// Read far-field files, optionally de-embed, and combine.
pub fn coverage_files(ff_paths: &[PathBuf], calibration: Option<&Path>) -> Result<CoverageResult> {
    let mut patterns = ff_paths.iter().map(io::read_far_field).collect::<Result<Vec<_>>>()?;
    if let Some(c) = calibration {
        patterns = deembed_all(&patterns, &io::read_calibrations(c)?)?;
    }
    Ok(spherical_coverage(&PortPatternSet::new(patterns)?))
}

/// Estimate one loss per (measured, reference) pair.
pub fn calibrate_patterns(
    pairs: &[(FarFieldPattern, FarFieldPattern)],
    region: &Region,
    averaging: Averaging,
) -> Result<Vec<LossEstimate>> {
    pairs
        .iter()
        .map(|(m, r)| estimate_loss(m, r, region, averaging))
        .collect()
}

fn blockage_mask(cfg: &RunConfig, geometry: crate::fields::ScanGeometry) -> Result<Option<BlockageMask>> {
    if cfg.mask.is_empty() {
        return Ok(None);
    }
    let mut mask = BlockageMask::ones(geometry);
    for r in &cfg.mask {
        mask = mask.with_rect(
            r.name.clone(),
            (r.x_m[0], r.x_m[1]),
            (r.y_m[0], r.y_m[1]),
            Complex64::new(r.transmission[0], r.transmission[1]),
        )?;
    }
    Ok(Some(mask))
}

fn simulated_scan(cfg: &RunConfig, port: &io::PortConfig) -> Result<NearFieldScan> {
    let geometry = cfg
        .geometry
        .ok_or_else(|| Error::Config("simulating needs a `preset` or a `[geometry]` table".into()))?;
    let mut scan = sample_near_field(&port.sources, &geometry, cfg.frequency)?.with_label(port.label.clone());
    if let Some(mask) = blockage_mask(cfg, geometry)? {
        scan = apply_blockage(&scan, &mask)?;
    }
    Ok(scan)
}

fn log_setup(scan: &NearFieldScan, theta_max: f64) -> Result<()> {
    let report = validate_setup(scan.geometry(), scan.frequency(), theta_max)?;
    for w in &report.warnings {
        warn!("scan `{}`: {w}", scan.label());
    }
    Ok(())
}

/// Synthesize scans (and analytic reference patterns) for every port that
/// lists sources. Writes `<label>.scan` and `<label>.ref.ff` to the output
/// directory and returns the written paths.
pub fn simulate(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let opts = TransformOptions::from_config(cfg);
    let grid = opts.grid()?;
    std::fs::create_dir_all(&cfg.output_dir)?;
    let mut written = Vec::new();
    for port in cfg.ports.iter().filter(|p| !p.sources.is_empty()) {
        let mut scan = simulated_scan(cfg, port)?;
        if let Some(mode) = cfg.major_polarization {
            scan = scan.major_only(mode);
        }
        log_setup(&scan, cfg.theta_max)?;
        let path = cfg.output_dir.join(format!("{}.scan", port.label));
        io::write_scan(&ScanFile::new(scan), &path)?;
        written.push(path);

        let reference = analytic_far_field(port.label.clone(), &port.sources, grid.clone(), cfg.far_radius, cfg.frequency)?;
        let path = cfg.output_dir.join(format!("{}.ref.ff", port.label));
        io::write_far_field(&reference, &path)?;
        written.push(path);
    }
    if written.is_empty() {
        return Err(Error::Config("no port lists sources to simulate".into()));
    }
    Ok(written)
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    /// Far fields after de-embedding, in port order.
    pub patterns: Vec<FarFieldPattern>,
    pub calibrations: Vec<PortCalibration>,
    pub coverage: CoverageResult,
    pub written: Vec<PathBuf>,
}

/// Scans → far fields → calibration → equal-gain coverage, with every
/// intermediate written to the output directory.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome> {
    cfg.check_inputs()?;
    let opts = TransformOptions::from_config(cfg);
    let grid = opts.grid()?;
    let out = &cfg.output_dir;
    std::fs::create_dir_all(out)?;

    let mut scans = Vec::with_capacity(cfg.ports.len());
    for port in &cfg.ports {
        let mut scan = match &port.scan {
            Some(path) => io::read_scan(path)?.scan.with_label(port.label.clone()),
            None => simulated_scan(cfg, port)?,
        };
        if let Some(mode) = cfg.major_polarization {
            scan = scan.major_only(mode);
        }
        log_setup(&scan, cfg.theta_max)?;
        scans.push(scan);
    }
    info!("transforming {} ports onto {} directions", scans.len(), grid.len());
    let measured = transform_scans(&scans, grid.clone(), cfg.far_radius, cfg.kernel)?;

    let mut written = Vec::new();
    let calibrations = match cfg.calibration.mode {
        CalibrationMode::None => measured.iter().map(|p| PortCalibration::new(p.label.clone(), 0.0, 0.0)).collect(),
        CalibrationMode::File => {
            let path = cfg.calibration.file.as_ref().expect("checked when the config was loaded");
            io::read_calibrations(path)?
        }
        CalibrationMode::Estimate => {
            let region = Region::MainBeam {
                within_db: cfg.calibration.region_db,
            };
            let mut pairs = Vec::with_capacity(cfg.ports.len());
            for (port, m) in cfg.ports.iter().zip(&measured) {
                let reference = match &port.reference {
                    Some(path) => io::read_far_field(path)?,
                    None if !port.sources.is_empty() => {
                        analytic_far_field(port.label.clone(), &port.sources, grid.clone(), cfg.far_radius, cfg.frequency)?
                    }
                    None => {
                        return Err(Error::Config(format!(
                            "port `{}` needs a reference pattern or sources to estimate its loss",
                            port.label
                        )))
                    }
                };
                pairs.push((m.clone(), reference));
            }
            let estimates = calibrate_patterns(&pairs, &region, cfg.calibration.averaging)?;
            let cals: Vec<_> = estimates.into_iter().map(|e| e.calibration).collect();
            let path = out.join("calibration.toml");
            io::write_calibrations(&cals, &path)?;
            written.push(path);
            cals
        }
    };

    let patterns = deembed_all(&measured, &calibrations)?;
    for p in &patterns {
        let path = out.join(format!("{}.ff", p.label));
        io::write_far_field(p, &path)?;
        written.push(path);
    }
    let coverage = spherical_coverage(&PortPatternSet::new(patterns.clone())?);
    let path = out.join("gain_map.csv");
    io::write_gain_map_csv(&coverage, &path)?;
    written.push(path);
    let path = out.join("cdf.csv");
    io::write_cdf_csv(&coverage, &path)?;
    written.push(path);

    Ok(RunOutcome {
        patterns,
        calibrations,
        coverage,
        written,
    })
}
