//! Near-field scan files.
//!
//! ```text
//! # nf2ff near-field scan
//! format_version = 1
//! frequency_hz = 2.8000000000000000e10
//! n_x = 81
//! n_y = 81
//! dx_m = 5.0000000000000001e-3
//! dy_m = 5.0000000000000001e-3
//! d_m = 2.0000000000000000e-2
//! offset_x_m = 0.0000000000000000e0
//! offset_y_m = 0.0000000000000000e0
//! polarization_mode = both
//! port_label = port1
//! end_header
//! # i j re_ex im_ex re_ey im_ey
//! 1 1 ...
//! ```
//!
//! Indices `i`, `j` are one-based. Rows may come in any order but every
//! `(i, j)` must appear exactly once. Unknown header keys are kept and
//! written back after the known ones.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use super::{fmt_f64, parse_f64, parse_usize, split_header, HeaderMap};
use crate::error::{Error, Result};
use crate::fields::{NearFieldScan, PolarizationMode, ScanGeometry};

pub const SCAN_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct ScanFile {
    pub scan: NearFieldScan,
    /// Header entries this version does not interpret.
    pub extra: Vec<(String, String)>,
}

impl ScanFile {
    pub fn new(scan: NearFieldScan) -> Self {
        Self { scan, extra: Vec::new() }
    }

    pub fn to_text(&self) -> String {
        let s = &self.scan;
        let g = s.geometry();
        let (ox, oy) = g.offset();
        let mut out = String::with_capacity(64 * g.len() + 512);
        out.push_str("# nf2ff near-field scan\n");
        let _ = writeln!(out, "format_version = {SCAN_FORMAT_VERSION}");
        let _ = writeln!(out, "frequency_hz = {}", fmt_f64(s.frequency()));
        let _ = writeln!(out, "n_x = {}", g.n_x());
        let _ = writeln!(out, "n_y = {}", g.n_y());
        let _ = writeln!(out, "dx_m = {}", fmt_f64(g.dx()));
        let _ = writeln!(out, "dy_m = {}", fmt_f64(g.dy()));
        let _ = writeln!(out, "d_m = {}", fmt_f64(g.d()));
        let _ = writeln!(out, "offset_x_m = {}", fmt_f64(ox));
        let _ = writeln!(out, "offset_y_m = {}", fmt_f64(oy));
        let _ = writeln!(out, "polarization_mode = {}", s.polarization_mode());
        let _ = writeln!(out, "port_label = {}", s.label());
        for (k, v) in &self.extra {
            let _ = writeln!(out, "{k} = {v}");
        }
        out.push_str("end_header\n# i j re_ex im_ex re_ey im_ey\n");
        for n in 0..g.len() {
            let (ix, iy) = g.grid_position(n);
            let (ex, ey) = (s.e_x()[n], s.e_y()[n]);
            let _ = writeln!(
                out,
                "{} {} {} {} {} {}",
                ix + 1,
                iy + 1,
                fmt_f64(ex.re),
                fmt_f64(ex.im),
                fmt_f64(ey.re),
                fmt_f64(ey.im)
            );
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let parts = split_header(text)?;
        let mut h = HeaderMap::new(parts.header)?;
        let (line, version) = h.require("format_version")?;
        let version = parse_usize(version, line, "format_version")?;
        if version != SCAN_FORMAT_VERSION as usize {
            return Err(Error::parse(
                line,
                format!("unsupported scan format version {version}, expected {SCAN_FORMAT_VERSION}"),
            ));
        }
        let frequency = h.f64("frequency_hz")?;
        let (n_x, n_y) = (h.usize("n_x")?, h.usize("n_y")?);
        let (dx, dy, d) = (h.f64("dx_m")?, h.f64("dy_m")?, h.f64("d_m")?);
        let ox = h.get("offset_x_m").map(|(l, v)| parse_f64(v, l, "offset_x_m")).transpose()?.unwrap_or(0.0);
        let oy = h.get("offset_y_m").map(|(l, v)| parse_f64(v, l, "offset_y_m")).transpose()?.unwrap_or(0.0);
        let (mline, mode) = h.require("polarization_mode")?;
        let mode: PolarizationMode = mode.parse().map_err(|e: Error| Error::parse(mline, e.to_string()))?;
        let label = h.get("port_label").map(|(_, v)| v.to_string()).unwrap_or_default();
        let extra = h.unused();

        let geometry = ScanGeometry::new(n_x, n_y, dx, dy, d)
            .map_err(|e| Error::parse(line, e.to_string()))?
            .with_offset(ox, oy);
        let n = geometry.len();
        let zero = Complex64::new(0.0, 0.0);
        let mut e_x = vec![zero; n];
        let mut e_y = vec![zero; n];
        let mut seen: Vec<Option<usize>> = vec![None; n];

        for &(lineno, row) in &parts.body {
            let cols: Vec<&str> = row.split_whitespace().collect();
            if cols.len() != 6 {
                return Err(Error::parse(lineno, format!("expected 6 columns, found {}", cols.len())));
            }
            let i = parse_usize(cols[0], lineno, "i")?;
            let j = parse_usize(cols[1], lineno, "j")?;
            if !(1..=n_x).contains(&i) || !(1..=n_y).contains(&j) {
                return Err(Error::parse(
                    lineno,
                    format!("index ({i}, {j}) outside the {n_x} x {n_y} grid"),
                ));
            }
            let idx = geometry.index(i - 1, j - 1);
            if let Some(first) = seen[idx] {
                return Err(Error::parse(
                    lineno,
                    format!("duplicate sample ({i}, {j}), first given on line {first}"),
                ));
            }
            seen[idx] = Some(lineno);
            let v: Vec<f64> = cols[2..]
                .iter()
                .map(|c| parse_f64(c, lineno, "field value"))
                .collect::<Result<_>>()?;
            e_x[idx] = Complex64::new(v[0], v[1]);
            e_y[idx] = Complex64::new(v[2], v[3]);
        }
        if parts.body.len() != n {
            let last = parts.body.last().map(|b| b.0).unwrap_or(1);
            let missing = seen.iter().position(Option::is_none).map(|m| geometry.grid_position(m));
            let detail = match missing {
                Some((ix, iy)) => format!(", first missing sample is ({}, {})", ix + 1, iy + 1),
                None => String::new(),
            };
            return Err(Error::parse(
                last,
                format!("expected {n} rows, found {}{detail}", parts.body.len()),
            ));
        }
        let scan = NearFieldScan::new(geometry, frequency, e_x, e_y, mode)
            .map_err(|e| Error::parse(mline, e.to_string()))?
            .with_label(label);
        Ok(Self { scan, extra })
    }
}

pub fn read_scan(path: impl AsRef<Path>) -> Result<ScanFile> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    ScanFile::parse(&text).map_err(|e| e.with_path(path))
}

pub fn write_scan(file: &ScanFile, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, file.to_text())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ScanFile {
        let g = ScanGeometry::new(3, 2, 0.005, 0.004, 0.02).unwrap().with_offset(0.001, -0.002);
        let ex = (0..6).map(|i| Complex64::new(i as f64 / 3.0, -0.1 * i as f64)).collect();
        let ey = (0..6).map(|i| Complex64::new(1e-7 * i as f64, std::f64::consts::PI)).collect();
        let scan = NearFieldScan::new(g, 28e9, ex, ey, PolarizationMode::Both).unwrap().with_label("port3");
        ScanFile {
            scan,
            extra: vec![("operator".into(), "lab A".into())],
        }
    }

    #[test]
    fn round_trip_is_exact() {
        let f = sample();
        let back = ScanFile::parse(&f.to_text()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn missing_row_names_the_gap() {
        let text = sample().to_text();
        let cut: Vec<&str> = text.lines().filter(|l| !l.starts_with("2 1 ")).collect();
        let err = ScanFile::parse(&cut.join("\n")).unwrap_err().to_string();
        assert!(err.contains("expected 6 rows, found 5"), "{err}");
        assert!(err.contains("(2, 1)"), "{err}");
    }

    #[test]
    fn duplicate_row_names_both_lines() {
        let mut text = sample().to_text();
        let dup = text.lines().find(|l| l.starts_with("1 2 ")).unwrap().to_string();
        text.push_str(&dup);
        text.push('\n');
        let err = ScanFile::parse(&text).unwrap_err();
        match err {
            Error::Parse { line, message, .. } => {
                assert_eq!(line, text.lines().count());
                assert!(message.contains("duplicate sample (1, 2)"));
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn version_mismatch() {
        let text = sample().to_text().replace("format_version = 1", "format_version = 7");
        let err = ScanFile::parse(&text).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn major_only_file_with_minor_data_is_rejected() {
        let text = sample().to_text().replace("polarization_mode = both", "polarization_mode = major_x_only");
        assert!(ScanFile::parse(&text).is_err());
    }
}
