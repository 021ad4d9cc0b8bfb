//! Equal-gain combining of port patterns and spherical-coverage statistics.
//!
//! For every direction and each polarization independently, every port is
//! co-phased with a unit-magnitude weight and the weights are scaled to unit
//! total power, so the combined amplitude is `(1/√M) Σ_m |E_p,m|`. The
//! combined field is reported with zero phase. The coverage gain is
//! `Ĝ = sqrt(|E_θ,comb|² + |E_φ,comb|²)` and its CDF is the empirical step
//! CDF over the grid with weight `1/K` per direction.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fields::{dbi_offset, FarFieldPattern};
use crate::grid::SphericalGrid;

/// Per-port patterns on one shared direction grid.
#[derive(Debug, Clone)]
pub struct PortPatternSet {
    patterns: Vec<FarFieldPattern>,
}

impl PortPatternSet {
    pub fn new(patterns: Vec<FarFieldPattern>) -> Result<Self> {
        let first = patterns
            .first()
            .ok_or_else(|| Error::domain("port set needs at least one pattern"))?;
        for p in &patterns[1..] {
            if !(Arc::ptr_eq(&p.grid, &first.grid) || p.grid.same_directions(&first.grid)) {
                return Err(Error::contract(format!(
                    "port `{}` is on a different grid than port `{}`",
                    p.label, first.label
                )));
            }
            if p.frequency != first.frequency {
                return Err(Error::contract(format!(
                    "port `{}` at {} Hz, port `{}` at {} Hz",
                    p.label, p.frequency, first.label, first.frequency
                )));
            }
            if p.r != first.r {
                return Err(Error::contract("ports evaluated at different far radii"));
            }
        }
        Ok(Self { patterns })
    }

    pub fn patterns(&self) -> &[FarFieldPattern] {
        &self.patterns
    }

    pub fn labels(&self) -> Vec<&str> {
        self.patterns.iter().map(|p| p.label.as_str()).collect()
    }

    pub fn grid(&self) -> &Arc<SphericalGrid> {
        &self.patterns[0].grid
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn r(&self) -> f64 {
        self.patterns[0].r
    }
}

/// Co-phased combined fields, one entry per direction.
#[derive(Debug, Clone, PartialEq)]
pub struct CombinedField {
    pub e_theta: Vec<Complex64>,
    pub e_phi: Vec<Complex64>,
}

/// Sum of magnitudes with a fixed summation order (ascending), so the
/// result does not depend on the order in which ports were given.
fn ordered_magnitude_sum(buf: &mut [f64]) -> f64 {
    buf.sort_by(f64::total_cmp);
    buf.iter().sum()
}

/// Unnormalized `Σ_m |E_p,m|` per direction for θ and φ.
pub fn magnitude_sums(ports: &PortPatternSet) -> (Vec<f64>, Vec<f64>) {
    let k = ports.grid().len();
    let mut buf = vec![0.0; ports.len()];
    let mut sum = |field: fn(&FarFieldPattern) -> &[Complex64], i: usize| {
        for (b, p) in buf.iter_mut().zip(ports.patterns()) {
            *b = field(p)[i].norm();
        }
        ordered_magnitude_sum(&mut buf)
    };
    let theta = (0..k).map(|i| sum(|p| &p.e_theta, i)).collect();
    let phi = (0..k).map(|i| sum(|p| &p.e_phi, i)).collect();
    (theta, phi)
}

pub fn equal_gain_combine(ports: &PortPatternSet) -> CombinedField {
    let norm = 1.0 / (ports.len() as f64).sqrt();
    let (st, sp) = magnitude_sums(ports);
    let to_field = |v: Vec<f64>| v.into_iter().map(|s| Complex64::new(s * norm, 0.0)).collect();
    CombinedField {
        e_theta: to_field(st),
        e_phi: to_field(sp),
    }
}

/// Per-direction combined gain and its empirical CDF.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageResult {
    grid: Arc<SphericalGrid>,
    r: f64,
    g_hat: Vec<f64>,
    sorted: Vec<f64>,
}

impl CoverageResult {
    /// Build from per-direction gains (linear field magnitude).
    pub fn from_gains(grid: Arc<SphericalGrid>, r: f64, g_hat: Vec<f64>) -> Result<Self> {
        if g_hat.len() != grid.len() {
            return Err(Error::contract(format!(
                "{} gains for a grid of {} directions",
                g_hat.len(),
                grid.len()
            )));
        }
        if let Some(g) = g_hat.iter().find(|g| !g.is_finite() || **g < 0.0) {
            return Err(Error::domain(format!("gain {g} is not a finite magnitude")));
        }
        let mut sorted = g_hat.clone();
        sorted.sort_by(f64::total_cmp);
        Ok(Self { grid, r, g_hat, sorted })
    }

    pub fn grid(&self) -> &Arc<SphericalGrid> {
        &self.grid
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// Combined gain per direction as a linear field magnitude.
    pub fn g_hat(&self) -> &[f64] {
        &self.g_hat
    }

    /// Combined realized gain per direction in dBi (1 W accepted power).
    pub fn g_hat_dbi(&self) -> Vec<f64> {
        let off = dbi_offset(self.r);
        self.g_hat.iter().map(|g| 20.0 * g.log10() + off).collect()
    }

    pub fn to_dbi(&self, g: f64) -> f64 {
        20.0 * g.log10() + dbi_offset(self.r)
    }

    /// Step CDF as `(g_(i), i / K)` pairs, `i = 1..=K`, over the sorted gains.
    pub fn cdf(&self) -> Vec<(f64, f64)> {
        let k = self.sorted.len() as f64;
        self.sorted
            .iter()
            .enumerate()
            .map(|(i, &g)| (g, (i + 1) as f64 / k))
            .collect()
    }

    /// Fraction of directions with `Ĝ ≤ g`.
    pub fn cdf_at(&self, g: f64) -> f64 {
        let count = self.sorted.partition_point(|&v| v <= g);
        count as f64 / self.sorted.len() as f64
    }

    /// Smallest gain `g` with `CDF(g) ≥ p`, linear magnitude. No
    /// interpolation between steps.
    pub fn percentile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::domain(format!("percentile level must be in (0, 1], got {p}")));
        }
        let k = self.sorted.len();
        // same probabilities as `cdf()`, so the two never disagree on a step
        let level = |i: usize| (i + 1) as f64 / k as f64;
        let mut idx = ((p * k as f64).ceil() as usize).clamp(1, k) - 1;
        while idx > 0 && level(idx - 1) >= p {
            idx -= 1;
        }
        while idx + 1 < k && level(idx) < p {
            idx += 1;
        }
        Ok(self.sorted[idx])
    }

    /// [`percentile`](Self::percentile) in dBi.
    pub fn percentile_dbi(&self, p: f64) -> Result<f64> {
        self.percentile(p).map(|g| self.to_dbi(g))
    }

    /// Index of a direction attaining the `p` percentile.
    pub fn percentile_direction(&self, p: f64) -> Result<usize> {
        let g = self.percentile(p)?;
        Ok(self
            .g_hat
            .iter()
            .position(|&v| v == g)
            .expect("percentile is one of the gains"))
    }
}

/// Equal-gain combine the ports and collect the coverage statistics.
pub fn spherical_coverage(ports: &PortPatternSet) -> CoverageResult {
    let combined = equal_gain_combine(ports);
    let g_hat = combined
        .e_theta
        .iter()
        .zip(&combined.e_phi)
        .map(|(a, b)| (a.norm_sqr() + b.norm_sqr()).sqrt())
        .collect();
    CoverageResult::from_gains(ports.grid().clone(), ports.r(), g_hat)
        .expect("magnitudes of finite fields on the port grid")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutSample {
    /// Index into the grid.
    pub index: usize,
    pub theta: f64,
    pub phi: f64,
    pub gain_dbi: f64,
}

fn wrapped_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(std::f64::consts::TAU);
    d.min(std::f64::consts::TAU - d)
}

/// For each ring, the direction nearest to azimuth `phi` if it lies within
/// half the ring's azimuth step. Sorted by θ.
pub fn cut_indices(grid: &SphericalGrid, phi: f64) -> Vec<usize> {
    let dirs = grid.directions();
    let mut out: Vec<usize> = grid
        .rings()
        .iter()
        .filter_map(|ring| {
            let best = ring.indices().min_by(|&a, &b| {
                wrapped_distance(dirs[a].phi, phi).total_cmp(&wrapped_distance(dirs[b].phi, phi))
            })?;
            let tol = 0.5 * ring.azimuth_step() * (1.0 + 1e-12);
            (wrapped_distance(dirs[best].phi, phi) <= tol).then_some(best)
        })
        .collect();
    out.sort_by(|&a, &b| dirs[a].theta.total_cmp(&dirs[b].theta));
    out
}

/// Realized gain of one pattern along a fixed-φ elevation cut.
pub fn elevation_cut(pattern: &FarFieldPattern, phi: f64) -> Vec<CutSample> {
    let gains = pattern.realized_gain_dbi();
    cut_indices(&pattern.grid, phi)
        .into_iter()
        .map(|i| {
            let d = pattern.grid.directions()[i];
            CutSample {
                index: i,
                theta: d.theta,
                phi: d.phi,
                gain_dbi: gains[i],
            }
        })
        .collect()
}

/// Combined gain along a fixed-φ elevation cut.
pub fn coverage_cut(result: &CoverageResult, phi: f64) -> Vec<CutSample> {
    let gains = result.g_hat_dbi();
    cut_indices(&result.grid, phi)
        .into_iter()
        .map(|i| {
            let d = result.grid.directions()[i];
            CutSample {
                index: i,
                theta: d.theta,
                phi: d.phi,
                gain_dbi: gains[i],
            }
        })
        .collect()
}
