//! Far-field pattern files, one port per file.
//!
//! Angles are written both in degrees for people and in radians so the
//! grid is rebuilt bit for bit.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;

use super::{fmt_f64, parse_f64, parse_usize, split_header, HeaderMap};
use crate::error::{Error, Result};
use crate::fields::{Direction, FarFieldPattern};
use crate::grid::SphericalGrid;

const FORMAT_VERSION: usize = 1;

fn to_text(p: &FarFieldPattern) -> String {
    let mut out = String::with_capacity(160 * p.len() + 256);
    out.push_str("# nf2ff far-field pattern\n");
    let _ = writeln!(out, "format_version = {FORMAT_VERSION}");
    let _ = writeln!(out, "port_label = {}", p.label);
    let _ = writeln!(out, "frequency_hz = {}", fmt_f64(p.frequency));
    let _ = writeln!(out, "r_m = {}", fmt_f64(p.r));
    let _ = writeln!(out, "theta_max_rad = {}", fmt_f64(p.grid.theta_max()));
    let _ = writeln!(out, "count = {}", p.len());
    out.push_str("end_header\n# k theta_deg phi_deg theta_rad phi_rad re_etheta im_etheta re_ephi im_ephi\n");
    for (k, (d, (et, ep))) in p
        .grid
        .directions()
        .iter()
        .zip(p.e_theta.iter().zip(&p.e_phi))
        .enumerate()
    {
        let _ = writeln!(
            out,
            "{} {:.6} {:.6} {} {} {} {} {} {}",
            k + 1,
            d.theta.to_degrees(),
            d.phi.to_degrees(),
            fmt_f64(d.theta),
            fmt_f64(d.phi),
            fmt_f64(et.re),
            fmt_f64(et.im),
            fmt_f64(ep.re),
            fmt_f64(ep.im)
        );
    }
    out
}

fn parse(text: &str) -> Result<FarFieldPattern> {
    let parts = split_header(text)?;
    let mut h = HeaderMap::new(parts.header)?;
    let (line, v) = h.require("format_version")?;
    if parse_usize(v, line, "format_version")? != FORMAT_VERSION {
        return Err(Error::parse(line, format!("unsupported far-field format version {v}")));
    }
    let label = h.get("port_label").map(|(_, v)| v.to_string()).unwrap_or_default();
    let frequency = h.f64("frequency_hz")?;
    let r = h.f64("r_m")?;
    let theta_max = h.f64("theta_max_rad")?;
    let count = h.usize("count")?;
    if parts.body.len() != count {
        let last = parts.body.last().map(|b| b.0).unwrap_or(1);
        return Err(Error::parse(last, format!("expected {count} rows, found {}", parts.body.len())));
    }
    let mut dirs = Vec::with_capacity(count);
    let mut et = Vec::with_capacity(count);
    let mut ep = Vec::with_capacity(count);
    for (expect, &(lineno, row)) in parts.body.iter().enumerate() {
        let cols: Vec<&str> = row.split_whitespace().collect();
        if cols.len() != 9 {
            return Err(Error::parse(lineno, format!("expected 9 columns, found {}", cols.len())));
        }
        let k = parse_usize(cols[0], lineno, "k")?;
        if k != expect + 1 {
            return Err(Error::parse(lineno, format!("expected row k = {}, found {k}", expect + 1)));
        }
        let v: Vec<f64> = cols[3..]
            .iter()
            .map(|c| parse_f64(c, lineno, "value"))
            .collect::<Result<_>>()?;
        dirs.push(Direction::new(v[0], v[1]));
        et.push(Complex64::new(v[2], v[3]));
        ep.push(Complex64::new(v[4], v[5]));
    }
    let end = parts.body.last().map(|b| b.0).unwrap_or(1);
    let grid = SphericalGrid::from_directions(dirs, theta_max).map_err(|e| Error::parse(end, e.to_string()))?;
    FarFieldPattern::new(label, Arc::new(grid), r, frequency, et, ep).map_err(|e| Error::parse(end, e.to_string()))
}

pub fn write_far_field(pattern: &FarFieldPattern, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_text(pattern))?;
    Ok(())
}

pub fn read_far_field(path: impl AsRef<Path>) -> Result<FarFieldPattern> {
    let path = path.as_ref();
    parse(&std::fs::read_to_string(path)?).map_err(|e| e.with_path(path))
}
