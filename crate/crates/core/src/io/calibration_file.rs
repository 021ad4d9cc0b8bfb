//! Calibration files: one `[[port]]` table per port.
//!
//! ```toml
//! [[port]]
//! label = "port1"
//! loss_db = 93.0
//! phase_rad = 0.0
//! reference = "sim-port1"
//! region = "main beam, -3 dB contour"
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::calibration::PortCalibration;
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
struct Entry {
    label: String,
    loss_db: f64,
    phase_rad: f64,
    #[serde(default)]
    reference: String,
    #[serde(default)]
    region: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct File {
    #[serde(default)]
    port: Vec<Entry>,
}

pub(crate) fn to_text(cals: &[PortCalibration]) -> String {
    let file = File {
        port: cals
            .iter()
            .map(|c| Entry {
                label: c.label.clone(),
                loss_db: c.loss_db,
                phase_rad: c.phase_rad,
                reference: c.reference.clone(),
                region: c.region.clone(),
            })
            .collect(),
    };
    toml::to_string(&file).expect("calibration entries serialize")
}

pub(crate) fn parse(text: &str) -> Result<Vec<PortCalibration>> {
    let file: File = toml::from_str(text).map_err(|e| {
        let line = e
            .span()
            .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1)
            .unwrap_or(1);
        Error::parse(line, e.message().to_string())
    })?;
    let mut out: Vec<PortCalibration> = Vec::with_capacity(file.port.len());
    for e in file.port {
        if out.iter().any(|c| c.label == e.label) {
            return Err(Error::Config(format!("port `{}` calibrated twice", e.label)));
        }
        if !e.loss_db.is_finite() || !e.phase_rad.is_finite() {
            return Err(Error::Config(format!("port `{}` has a non-finite loss", e.label)));
        }
        out.push(PortCalibration {
            label: e.label,
            loss_db: e.loss_db,
            phase_rad: e.phase_rad,
            reference: e.reference,
            region: e.region,
        });
    }
    Ok(out)
}

pub fn write_calibrations(cals: &[PortCalibration], path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_text(cals))?;
    Ok(())
}

pub fn read_calibrations(path: impl AsRef<Path>) -> Result<Vec<PortCalibration>> {
    let path = path.as_ref();
    parse(&std::fs::read_to_string(path)?).map_err(|e| e.with_path(path))
}
