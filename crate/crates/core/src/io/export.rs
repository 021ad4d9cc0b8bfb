//! CSV output for plotting.

use std::path::Path;

use super::fmt_f64;
use crate::error::Result;
use crate::synthesis::{CoverageResult, CutSample};

/// Per-direction combined gain: `k,theta_deg,phi_deg,g_hat,gain_dbi`.
pub fn write_gain_map_csv(result: &CoverageResult, path: impl AsRef<Path>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["k", "theta_deg", "phi_deg", "g_hat", "gain_dbi"])?;
    let dbi = result.g_hat_dbi();
    for (k, (d, (g, db))) in result
        .grid()
        .directions()
        .iter()
        .zip(result.g_hat().iter().zip(&dbi))
        .enumerate()
    {
        w.write_record([
            (k + 1).to_string(),
            fmt_f64(d.theta.to_degrees()),
            fmt_f64(d.phi.to_degrees()),
            fmt_f64(*g),
            fmt_f64(*db),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Step CDF: `gain_db,gain_linear,probability`, one row per direction in
/// ascending gain order.
pub fn write_cdf_csv(result: &CoverageResult, path: impl AsRef<Path>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["gain_db", "gain_linear", "probability"])?;
    for (g, p) in result.cdf() {
        w.write_record([fmt_f64(result.to_dbi(g)), fmt_f64(g), fmt_f64(p)])?;
    }
    w.flush()?;
    Ok(())
}

/// Elevation cut: `theta_deg,phi_deg,gain_dbi,k`.
pub fn write_cut_csv(cut: &[CutSample], path: impl AsRef<Path>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["theta_deg", "phi_deg", "gain_dbi", "k"])?;
    for s in cut {
        w.write_record([
            fmt_f64(s.theta.to_degrees()),
            fmt_f64(s.phi.to_degrees()),
            fmt_f64(s.gain_dbi),
            (s.index + 1).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
