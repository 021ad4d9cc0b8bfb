//! Scan-setup checks: standoff between one and five wavelengths, sample
//! step below half a wavelength, and a scan plane wide enough for the
//! requested validity cone.

use std::fmt;

use crate::error::Result;
use crate::fields::{wavelength, ScanGeometry};

#[derive(Debug, Clone, PartialEq)]
pub enum SetupWarning {
    /// Standoff outside `[1λ, 5λ]`.
    Distance { d_wavelengths: f64 },
    /// `Δx` or `Δy` at or above `λ/2`. One warning covers both axes.
    Step { dx_wavelengths: f64, dy_wavelengths: f64 },
    /// Truncation half-angle `atan(min(L_x, L_y) / 2d)` below the cone.
    Truncation { half_angle: f64, theta_max: f64 },
}

impl SetupWarning {
    /// Distance and step violations are hard failures for the CLI; the
    /// truncation check is informative.
    pub fn is_hard(&self) -> bool {
        !matches!(self, SetupWarning::Truncation { .. })
    }
}

impl fmt::Display for SetupWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetupWarning::Distance { d_wavelengths } => write!(
                f,
                "standoff d = {d_wavelengths:.3} λ is outside the 1..5 λ range"
            ),
            SetupWarning::Step {
                dx_wavelengths,
                dy_wavelengths,
            } => write!(
                f,
                "sampling step Δx = {dx_wavelengths:.3} λ, Δy = {dy_wavelengths:.3} λ is not below 0.5 λ"
            ),
            SetupWarning::Truncation {
                half_angle,
                theta_max,
            } => write!(
                f,
                "truncation half-angle {:.1}° is below the requested θ_max {:.1}°",
                half_angle.to_degrees(),
                theta_max.to_degrees()
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SetupReport {
    pub wavelength: f64,
    /// `atan(min(L_x, L_y) / (2 d))`.
    pub truncation_half_angle: f64,
    pub warnings: Vec<SetupWarning>,
}

impl SetupReport {
    pub fn has_hard_violation(&self) -> bool {
        self.warnings.iter().any(SetupWarning::is_hard)
    }
}

pub fn validate_setup(geometry: &ScanGeometry, frequency: f64, theta_max: f64) -> Result<SetupReport> {
    let lambda = wavelength(frequency)?;
    let mut warnings = Vec::new();

    let d_wl = geometry.d() / lambda;
    if !(1.0..=5.0).contains(&d_wl) {
        warnings.push(SetupWarning::Distance { d_wavelengths: d_wl });
    }

    let (dx_wl, dy_wl) = (geometry.dx() / lambda, geometry.dy() / lambda);
    if dx_wl >= 0.5 || dy_wl >= 0.5 {
        warnings.push(SetupWarning::Step {
            dx_wavelengths: dx_wl,
            dy_wavelengths: dy_wl,
        });
    }

    let half_angle = (geometry.l_x().min(geometry.l_y()) / (2.0 * geometry.d())).atan();
    if half_angle < theta_max {
        warnings.push(SetupWarning::Truncation {
            half_angle,
            theta_max,
        });
    }

    Ok(SetupReport {
        wavelength: lambda,
        truncation_half_angle: half_angle,
        warnings,
    })
}
