//! Analytic test sources, canned scan setups and blockage masks.
//!
//! Sources are elementary magnetic current elements with moment `K` (V·m)
//! along `û`. Their electric field is exact at any distance:
//!
//! ```text
//! E(r) = K (j k0 + 1/R) exp(-j k0 R) / (4π R²) · ((r - r_s) × û)
//! ```
//!
//! and in the far zone reduces to
//! `E ≈ j k0 K exp(-j k0 r) / (4π r) · exp(j k0 r̂·r_s) · (r̂ × û)`.
//!
//! The blockage mask multiplies the scan-plane fields by a transmission
//! factor. It emulates shadowing by a hand at the scan plane; it is not an
//! electromagnetic model of tissue.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fields::{FarFieldPattern, NearFieldScan, PolarizationMode, ScanGeometry, C0, ETA0};
use crate::grid::{SphericalGrid, DEFAULT_THETA_MAX};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    X,
    Y,
}

impl Orientation {
    fn unit(self) -> [f64; 3] {
        match self {
            Orientation::X => [1.0, 0.0, 0.0],
            Orientation::Y => [0.0, 1.0, 0.0],
        }
    }
}

/// Elementary magnetic current element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointSource {
    pub position: [f64; 3],
    pub moment: Complex64,
    pub orientation: Orientation,
}

impl PointSource {
    pub fn new(position: [f64; 3], moment: Complex64, orientation: Orientation) -> Result<Self> {
        if !(moment.norm() > 0.0) {
            return Err(Error::domain("source moment must be non-zero"));
        }
        Ok(Self {
            position,
            moment,
            orientation,
        })
    }

    /// Exact field at `p`.
    pub fn field_at(&self, p: [f64; 3], k0: f64) -> [Complex64; 3] {
        let d = [
            p[0] - self.position[0],
            p[1] - self.position[1],
            p[2] - self.position[2],
        ];
        let r = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
        let (s, c) = (k0 * r).sin_cos();
        let scale = self.moment * Complex64::new(1.0 / r, k0) * Complex64::new(c, -s) / (4.0 * PI * r * r);
        let u = self.orientation.unit();
        let cross = [
            d[1] * u[2] - d[2] * u[1],
            d[2] * u[0] - d[0] * u[2],
            d[0] * u[1] - d[1] * u[0],
        ];
        [scale * cross[0], scale * cross[1], scale * cross[2]]
    }

    /// Power radiated into free space, `k0² |K|² / (12 π η0)`.
    pub fn radiated_power(&self, k0: f64) -> f64 {
        k0 * k0 * self.moment.norm_sqr() / (12.0 * PI * ETA0)
    }
}

/// Tangential field of the sources sampled on the scan plane.
pub fn sample_near_field(
    sources: &[PointSource],
    geometry: &ScanGeometry,
    frequency: f64,
) -> Result<NearFieldScan> {
    let k0 = crate::fields::wavenumber(frequency)?;
    if let Some(s) = sources.iter().find(|s| !(s.position[2] < geometry.d())) {
        return Err(Error::geometry(format!(
            "source at z = {} m is not behind the scan plane z = {} m",
            s.position[2],
            geometry.d()
        )));
    }
    let (e_x, e_y): (Vec<Complex64>, Vec<Complex64>) = (0..geometry.len())
        .into_par_iter()
        .map(|n| {
            let p = geometry.point(n);
            sources.iter().fold(
                (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)),
                |(ex, ey), s| {
                    let e = s.field_at(p, k0);
                    (ex + e[0], ey + e[1])
                },
            )
        })
        .unzip();
    NearFieldScan::new(*geometry, frequency, e_x, e_y, PolarizationMode::Both)
}

/// Far-zone field of the sources projected on `θ̂` and `φ̂`.
pub fn analytic_far_field(
    label: impl Into<String>,
    sources: &[PointSource],
    grid: Arc<SphericalGrid>,
    r: f64,
    frequency: f64,
) -> Result<FarFieldPattern> {
    let k0 = crate::fields::wavenumber(frequency)?;
    let (sr, cr) = (k0 * r).sin_cos();
    let common = Complex64::new(0.0, k0) * Complex64::new(cr, -sr) / (4.0 * PI * r);
    let (e_theta, e_phi): (Vec<Complex64>, Vec<Complex64>) = grid
        .directions()
        .iter()
        .map(|dir| {
            let (st, ct) = dir.theta.sin_cos();
            let (sp, cp) = dir.phi.sin_cos();
            let rhat = [st * cp, st * sp, ct];
            let theta_hat = [ct * cp, ct * sp, -st];
            let phi_hat = [-sp, cp, 0.0];
            sources.iter().fold(
                (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)),
                |(et, ep), s| {
                    let u = s.orientation.unit();
                    let cross = [
                        rhat[1] * u[2] - rhat[2] * u[1],
                        rhat[2] * u[0] - rhat[0] * u[2],
                        rhat[0] * u[1] - rhat[1] * u[0],
                    ];
                    let proj = k0 * (rhat[0] * s.position[0] + rhat[1] * s.position[1] + rhat[2] * s.position[2]);
                    let a = common * s.moment * Complex64::from_polar(1.0, proj);
                    let dot = |v: [f64; 3]| v[0] * cross[0] + v[1] * cross[1] + v[2] * cross[2];
                    (et + a * dot(theta_hat), ep + a * dot(phi_hat))
                },
            )
        })
        .unzip();
    FarFieldPattern::new(label, grid, r, frequency, e_theta, e_phi)
}

/// Sources of a uniform linear array along x, one port per element.
///
/// Each port holds a y-oriented element at `x_m = (m - (M-1)/2) · spacing`.
/// With `cross_pol_db = Some(p)`, an x-oriented element `p` dB weaker is
/// added at a quarter spacing along +y, so the scan-plane field has finite
/// polarization purity.
pub fn linear_array_ports(
    elements: usize,
    spacing: f64,
    cross_pol_db: Option<f64>,
) -> Result<Vec<Vec<PointSource>>> {
    if elements == 0 {
        return Err(Error::domain("array needs at least one element"));
    }
    (0..elements)
        .map(|m| {
            let x = (m as f64 - (elements as f64 - 1.0) / 2.0) * spacing;
            let mut port = vec![PointSource::new([x, 0.0, 0.0], Complex64::new(1.0, 0.0), Orientation::Y)?];
            if let Some(db) = cross_pol_db {
                let amp = 10f64.powf(-db / 20.0);
                port.push(PointSource::new(
                    [x, 0.25 * spacing, 0.0],
                    Complex64::from_polar(amp, 0.25 * PI),
                    Orientation::X,
                )?);
            }
            Ok(port)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Band {
    Ghz28,
    Ghz39,
}

impl Band {
    pub fn frequency(self) -> f64 {
        match self {
            Band::Ghz28 => 28e9,
            Band::Ghz39 => 39e9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    FreeSpace,
    WithHand,
}

/// One lab scan setup.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanPreset {
    pub band: Band,
    pub scenario: Scenario,
    pub frequency: f64,
    pub geometry: ScanGeometry,
    /// Side of the square scan area, m.
    pub extent: f64,
    pub theta_max: f64,
    pub polarization_mode: PolarizationMode,
    pub measurement_minutes: u32,
}

impl ScanPreset {
    pub fn name(&self) -> String {
        let band = match self.band {
            Band::Ghz28 => "28",
            Band::Ghz39 => "39",
        };
        let sc = match self.scenario {
            Scenario::FreeSpace => "free_space",
            Scenario::WithHand => "with_hand",
        };
        format!("{band}_{sc}")
    }

    pub fn wavelength(&self) -> f64 {
        C0 / self.frequency
    }
}

/// Lab scan setups for the two cellphone mock-ups.
///
/// | band   | scenario   | d     | Δ    | L      | major only |
/// |--------|------------|-------|------|--------|------------|
/// | 28 GHz | free space | 20 mm | 5 mm | 400 mm | no         |
/// | 39 GHz | free space | 20 mm | 4 mm | 300 mm | no         |
/// | 28 GHz | with hand  | 50 mm | 5 mm | 200 mm | yes        |
/// | 39 GHz | with hand  | 50 mm | 4 mm | 200 mm | yes        |
///
/// The sample count per axis includes both endpoints, `N = L/Δ + 1`.
/// Major-only presets use `major_x_only`; lab files may carry either axis.
pub fn table1_preset(band: Band, scenario: Scenario) -> ScanPreset {
    let (d, step, extent, minutes) = match (band, scenario) {
        (Band::Ghz28, Scenario::FreeSpace) => (0.020, 0.005, 0.400, 100),
        (Band::Ghz39, Scenario::FreeSpace) => (0.020, 0.004, 0.300, 80),
        (Band::Ghz28, Scenario::WithHand) => (0.050, 0.005, 0.200, 12),
        (Band::Ghz39, Scenario::WithHand) => (0.050, 0.004, 0.200, 15),
    };
    let polarization_mode = match scenario {
        Scenario::FreeSpace => PolarizationMode::Both,
        Scenario::WithHand => PolarizationMode::MajorXOnly,
    };
    ScanPreset {
        band,
        scenario,
        frequency: band.frequency(),
        geometry: ScanGeometry::square(extent, step, d).expect("preset values are valid"),
        extent,
        theta_max: DEFAULT_THETA_MAX,
        polarization_mode,
        measurement_minutes: minutes,
    }
}

pub fn all_presets() -> Vec<ScanPreset> {
    [Band::Ghz28, Band::Ghz39]
        .into_iter()
        .flat_map(|b| [Scenario::FreeSpace, Scenario::WithHand].map(|s| table1_preset(b, s)))
        .collect()
}

/// Per-sample complex transmission applied to a scan.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockageMask {
    geometry: ScanGeometry,
    factors: Vec<Complex64>,
    regions: Vec<(String, Vec<usize>)>,
}

impl BlockageMask {
    /// Fully transparent mask.
    pub fn ones(geometry: ScanGeometry) -> Self {
        Self {
            geometry,
            factors: vec![Complex64::new(1.0, 0.0); geometry.len()],
            regions: Vec::new(),
        }
    }

    pub fn from_factors(geometry: ScanGeometry, factors: Vec<Complex64>) -> Result<Self> {
        if factors.len() != geometry.len() {
            return Err(Error::contract(format!(
                "mask has {} factors for {} samples",
                factors.len(),
                geometry.len()
            )));
        }
        if let Some(f) = factors.iter().find(|f| !(f.norm() <= 1.0 + 1e-12)) {
            return Err(Error::domain(format!("transmission {f} exceeds unit magnitude")));
        }
        Ok(Self {
            geometry,
            factors,
            regions: Vec::new(),
        })
    }

    /// Set every sample inside the rectangle to `transmission` and record
    /// the region under `name`.
    pub fn with_rect(
        mut self,
        name: impl Into<String>,
        x_range: (f64, f64),
        y_range: (f64, f64),
        transmission: Complex64,
    ) -> Result<Self> {
        if transmission.norm() > 1.0 + 1e-12 {
            return Err(Error::domain("transmission exceeds unit magnitude"));
        }
        let mut idx = Vec::new();
        for n in 0..self.geometry.len() {
            let p = self.geometry.point(n);
            if p[0] >= x_range.0 && p[0] <= x_range.1 && p[1] >= y_range.0 && p[1] <= y_range.1 {
                self.factors[n] = transmission;
                idx.push(n);
            }
        }
        self.regions.push((name.into(), idx));
        Ok(self)
    }

    /// Opaque for `x' < 0`, half transmission on `x' = 0`, clear elsewhere.
    pub fn half_plane(geometry: ScanGeometry) -> Self {
        let (ox, _) = geometry.offset();
        let factors = (0..geometry.len())
            .map(|n| {
                let x = geometry.point(n)[0] - ox;
                let t = if x.abs() < 1e-9 * geometry.dx() {
                    0.5
                } else if x < 0.0 {
                    0.0
                } else {
                    1.0
                };
                Complex64::new(t, 0.0)
            })
            .collect();
        Self {
            geometry,
            factors,
            regions: vec![("half plane x < 0".to_string(), Vec::new())],
        }
    }

    pub fn factors(&self) -> &[Complex64] {
        &self.factors
    }

    pub fn regions(&self) -> &[(String, Vec<usize>)] {
        &self.regions
    }

    pub fn geometry(&self) -> &ScanGeometry {
        &self.geometry
    }
}

pub fn apply_blockage(scan: &NearFieldScan, mask: &BlockageMask) -> Result<NearFieldScan> {
    if mask.geometry != *scan.geometry() || mask.factors.len() != scan.e_x().len() {
        return Err(Error::contract("mask and scan have different grids"));
    }
    Ok(scan.map_fields(|n, v| v * mask.factors[n]))
}
