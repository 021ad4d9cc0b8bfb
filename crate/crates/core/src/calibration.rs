//! Per-port complex loss factors and their de-embedding.
//!
//! A loss is stored as an attenuation in dB plus a phase. The complex
//! transmission factor is `t = 10^(-loss_db/20) · exp(j phase)`, so a
//! measured pattern relates to its reference as `measured ≈ t · reference`.
//! Embedding multiplies a pattern by `t` and de-embedding divides by it.

use std::fmt;

use log::warn;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fields::{Direction, FarFieldPattern};

/// Reference-field magnitude, relative to the reference peak, below which a
/// direction is dropped from the average.
pub const EXCLUSION_FLOOR: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq)]
pub struct PortCalibration {
    pub label: String,
    /// Attenuation in dB (positive means the measurement is weaker).
    pub loss_db: f64,
    pub phase_rad: f64,
    /// Label of the reference pattern the estimate came from.
    pub reference: String,
    /// Human-readable description of the averaging region.
    pub region: String,
}

impl PortCalibration {
    pub fn new(label: impl Into<String>, loss_db: f64, phase_rad: f64) -> Self {
        Self {
            label: label.into(),
            loss_db,
            phase_rad,
            reference: String::new(),
            region: String::new(),
        }
    }

    /// Complex transmission factor `t`.
    pub fn factor(&self) -> Complex64 {
        Complex64::from_polar(10f64.powf(-self.loss_db / 20.0), self.phase_rad)
    }

    fn checked_factor(&self) -> Result<Complex64> {
        let t = self.factor();
        if !self.loss_db.is_finite() || !self.phase_rad.is_finite() || t.norm() == 0.0 || !t.norm().is_finite() {
            return Err(Error::domain(format!(
                "calibration `{}` has an unusable factor ({} dB, {} rad)",
                self.label, self.loss_db, self.phase_rad
            )));
        }
        Ok(t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CalibrationDirection {
    /// Multiply by the loss factor (reference → measured).
    Embed,
    /// Divide by the loss factor (measured → reference).
    Deembed,
}

pub fn apply_calibration(
    pattern: &FarFieldPattern,
    cal: &PortCalibration,
    direction: CalibrationDirection,
) -> Result<FarFieldPattern> {
    let t = cal.checked_factor()?;
    let factor = match direction {
        CalibrationDirection::Embed => t,
        CalibrationDirection::Deembed => t.inv(),
    };
    Ok(pattern.scaled(factor))
}

/// Directions used to average the measured/reference ratio.
#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    /// Directions where the reference total field is within `within_db` of
    /// its peak.
    MainBeam { within_db: f64 },
    /// Every direction with `θ ≤ theta_max`.
    Cone { theta_max: f64 },
    /// Explicit grid indices.
    Indices(Vec<usize>),
}

impl Default for Region {
    fn default() -> Self {
        Region::MainBeam { within_db: 3.0 }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::MainBeam { within_db } => write!(f, "main beam, -{within_db} dB contour"),
            Region::Cone { theta_max } => write!(f, "cone theta <= {:.3} deg", theta_max.to_degrees()),
            Region::Indices(v) => write!(f, "{} explicit directions", v.len()),
        }
    }
}

impl Region {
    fn mask(&self, reference: &FarFieldPattern) -> Result<Vec<bool>> {
        let k = reference.len();
        Ok(match self {
            Region::MainBeam { within_db } => {
                if !(*within_db >= 0.0) {
                    return Err(Error::domain("main-beam contour must be non-negative"));
                }
                let mag = reference.magnitude();
                let peak = mag.iter().cloned().fold(0.0, f64::max);
                let floor = peak * 10f64.powf(-within_db / 20.0);
                mag.iter().map(|&m| peak > 0.0 && m >= floor).collect()
            }
            Region::Cone { theta_max } => reference
                .grid
                .directions()
                .iter()
                .map(|d: &Direction| d.theta <= *theta_max)
                .collect(),
            Region::Indices(idx) => {
                let mut m = vec![false; k];
                for &i in idx {
                    *m.get_mut(i).ok_or_else(|| {
                        Error::contract(format!("region index {i} outside grid of {k}"))
                    })? = true;
                }
                m
            }
        })
    }
}

/// How per-direction ratios are averaged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Averaging {
    /// Complex mean of `measured / reference`.
    #[default]
    ComplexRatio,
    /// Mean of the dB magnitude differences; phase from the mean unit phasor.
    DbDifference,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LossEstimate {
    pub calibration: PortCalibration,
    pub used: usize,
    /// Directions in the region whose reference field was too weak.
    pub excluded: usize,
}

/// Estimate the loss of `measured` relative to `reference` over a region.
///
/// At each direction the component where the reference is stronger is used.
/// The calibration takes the label of `measured`.
pub fn estimate_loss(
    measured: &FarFieldPattern,
    reference: &FarFieldPattern,
    region: &Region,
    averaging: Averaging,
) -> Result<LossEstimate> {
    if measured.len() != reference.len() || !measured.grid.same_directions(&reference.grid) {
        return Err(Error::contract("measured and reference patterns are on different grids"));
    }
    let mask = region.mask(reference)?;
    if !mask.iter().any(|&b| b) {
        return Err(Error::domain(format!("region `{region}` selects no directions")));
    }
    let peak = reference.magnitude().into_iter().fold(0.0, f64::max);

    let mut ratios = Vec::new();
    let mut excluded = 0;
    for k in mask.iter().enumerate().filter_map(|(k, &b)| b.then_some(k)) {
        let (rt, rp) = (reference.e_theta[k], reference.e_phi[k]);
        let (r, m) = if rt.norm() >= rp.norm() {
            (rt, measured.e_theta[k])
        } else {
            (rp, measured.e_phi[k])
        };
        if !(r.norm() >= EXCLUSION_FLOOR * peak) || r.norm() == 0.0 {
            excluded += 1;
            continue;
        }
        ratios.push(m / r);
    }
    if excluded > 0 {
        warn!(
            "loss estimate for `{}`: excluded {excluded} directions with a negligible reference field",
            measured.label
        );
    }
    if ratios.is_empty() {
        return Err(Error::domain("every direction of the region was excluded"));
    }

    let n = ratios.len() as f64;
    let (loss_db, phase) = match averaging {
        Averaging::ComplexRatio => {
            let mean = ratios.iter().sum::<Complex64>() / n;
            (-20.0 * mean.norm().log10(), mean.arg())
        }
        Averaging::DbDifference => {
            let db = ratios.iter().map(|q| -20.0 * q.norm().log10()).sum::<f64>() / n;
            let phasor = ratios.iter().map(|q| q / q.norm()).sum::<Complex64>();
            (db, phasor.arg())
        }
    };
    if !loss_db.is_finite() {
        return Err(Error::domain("measured field vanishes over the region"));
    }
    Ok(LossEstimate {
        calibration: PortCalibration {
            label: measured.label.clone(),
            loss_db,
            phase_rad: phase,
            reference: reference.label.clone(),
            region: region.to_string(),
        },
        used: ratios.len(),
        excluded,
    })
}

/// Per-port losses estimated for the two lab prototypes (8 ports each).
pub mod fixtures {
    /// 28 GHz prototype, ports 1..=8, dB.
    pub const LOSSES_28GHZ_DB: [f64; 8] = [93.0, 91.3, 91.8, 90.9, 91.5, 91.1, 90.8, 91.0];
    /// 39 GHz prototype, ports 1..=8, dB.
    pub const LOSSES_39GHZ_DB: [f64; 8] = [99.1, 97.3, 97.0, 95.3, 96.9, 97.2, 97.3, 97.4];

    /// Calibration set for a prototype, labelled `port1` .. `port8`.
    pub fn table(frequency_ghz: u32) -> Option<Vec<super::PortCalibration>> {
        let losses = match frequency_ghz {
            28 => LOSSES_28GHZ_DB,
            39 => LOSSES_39GHZ_DB,
            _ => return None,
        };
        Some(
            losses
                .iter()
                .enumerate()
                .map(|(i, &db)| super::PortCalibration::new(format!("port{}", i + 1), db, 0.0))
                .collect(),
        )
    }
}
