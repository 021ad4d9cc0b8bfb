//! Text file formats and CSV export.
//!
//! Every floating-point value is written with 17 significant digits so that
//! a write/read cycle reproduces the in-memory value exactly.

mod calibration_file;
mod config;
mod export;
mod farfield_file;
mod scan_file;

pub use calibration_file::{read_calibrations, write_calibrations};
pub use config::{
    parse_preset_name, CalibrationConfig, CalibrationMode, MaskRect, PortConfig, RunConfig, SourceConfig,
    OUTPUT_DIR_ENV,
};
pub use export::{write_cdf_csv, write_cut_csv, write_gain_map_csv};
pub use farfield_file::{read_far_field, write_far_field};
pub use scan_file::{read_scan, write_scan, ScanFile, SCAN_FORMAT_VERSION};

use crate::error::{Error, Result};

pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub(crate) fn parse_f64(s: &str, line: usize, what: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::parse(line, format!("invalid number `{s}` for {what}")))
}

pub(crate) fn parse_usize(s: &str, line: usize, what: &str) -> Result<usize> {
    s.trim()
        .parse::<usize>()
        .map_err(|_| Error::parse(line, format!("invalid integer `{s}` for {what}")))
}

/// `key = value` header lines up to `end_header`, then the remaining body
/// lines. Blank lines and `#` comments are skipped. Returns header pairs in
/// file order with their line numbers, and body lines with line numbers.
pub(crate) struct HeaderedText<'a> {
    pub header: Vec<(usize, &'a str, &'a str)>,
    pub body: Vec<(usize, &'a str)>,
}

pub(crate) fn split_header(text: &str) -> Result<HeaderedText<'_>> {
    let mut header = Vec::new();
    let mut body = Vec::new();
    let mut in_header = true;
    let mut saw_end = false;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if in_header {
            if line == "end_header" {
                in_header = false;
                saw_end = true;
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(lineno, format!("expected `key = value`, got `{line}`")))?;
            header.push((lineno, k.trim(), v.trim()));
        } else {
            body.push((lineno, line));
        }
    }
    if !saw_end {
        return Err(Error::parse(text.lines().count().max(1), "missing `end_header` line"));
    }
    Ok(HeaderedText { header, body })
}

pub(crate) struct HeaderMap<'a> {
    entries: Vec<(usize, &'a str, &'a str)>,
    used: Vec<bool>,
    end_line: usize,
}

impl<'a> HeaderMap<'a> {
    pub fn new(entries: Vec<(usize, &'a str, &'a str)>) -> Result<Self> {
        for (i, (line, k, _)) in entries.iter().enumerate() {
            if entries[..i].iter().any(|(_, k2, _)| k2 == k) {
                return Err(Error::parse(*line, format!("duplicate header key `{k}`")));
            }
        }
        let end_line = entries.last().map(|e| e.0).unwrap_or(1);
        let used = vec![false; entries.len()];
        Ok(Self { entries, used, end_line })
    }

    pub fn get(&mut self, key: &str) -> Option<(usize, &'a str)> {
        let i = self.entries.iter().position(|(_, k, _)| *k == key)?;
        self.used[i] = true;
        Some((self.entries[i].0, self.entries[i].2))
    }

    pub fn require(&mut self, key: &str) -> Result<(usize, &'a str)> {
        self.get(key)
            .ok_or_else(|| Error::parse(self.end_line, format!("missing header key `{key}`")))
    }

    pub fn f64(&mut self, key: &str) -> Result<f64> {
        let (line, v) = self.require(key)?;
        parse_f64(v, line, key)
    }

    pub fn usize(&mut self, key: &str) -> Result<usize> {
        let (line, v) = self.require(key)?;
        parse_usize(v, line, key)
    }

    /// Header pairs nobody asked for, in file order.
    pub fn unused(&self) -> Vec<(String, String)> {
        self.entries
            .iter()
            .zip(&self.used)
            .filter(|(_, u)| !**u)
            .map(|((_, k, v), _)| (k.to_string(), v.to_string()))
            .collect()
    }
}
