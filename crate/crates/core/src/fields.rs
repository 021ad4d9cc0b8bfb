//! Domain types shared by the whole processing chain: scan geometry, sampled
//! near fields, far-field patterns and a few physical constants.
//!
//! Angles are radians and lengths are meters everywhere inside the crate.
//! Degrees and millimeters only appear at I/O boundaries.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::SphericalGrid;

/// Speed of light in vacuum, m/s (exact).
pub const C0: f64 = 299_792_458.0;

/// Free-space wave impedance, ohms.
pub const ETA0: f64 = 376.730_313_412;

/// Free-space wavenumber `2π f / c0` in rad/m.
pub fn wavenumber(frequency: f64) -> Result<f64> {
    if !(frequency > 0.0) || !frequency.is_finite() {
        return Err(Error::domain(format!(
            "frequency must be positive and finite, got {frequency} Hz"
        )));
    }
    Ok(2.0 * PI * frequency / C0)
}

/// Free-space wavelength in meters.
pub fn wavelength(frequency: f64) -> Result<f64> {
    wavenumber(frequency).map(|k0| 2.0 * PI / k0)
}

/// Regular planar sampling grid at standoff `d` in front of the antenna.
///
/// Samples are indexed `n = ix + iy * n_x` with zero-based `ix`, `iy`
/// (the one-based `n = i + (j - 1) N_x` of lab files maps onto this with
/// `ix = i - 1`, `iy = j - 1`). The plane is centered on the array middle,
/// shifted by an optional origin offset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanGeometry {
    n_x: usize,
    n_y: usize,
    dx: f64,
    dy: f64,
    d: f64,
    offset_x: f64,
    offset_y: f64,
}

impl ScanGeometry {
    pub fn new(n_x: usize, n_y: usize, dx: f64, dy: f64, d: f64) -> Result<Self> {
        if n_x < 2 || n_y < 2 {
            return Err(Error::domain(format!(
                "scan grid needs at least 2x2 points, got {n_x}x{n_y}"
            )));
        }
        for (name, v) in [("dx", dx), ("dy", dy), ("d", d)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self {
            n_x,
            n_y,
            dx,
            dy,
            d,
            offset_x: 0.0,
            offset_y: 0.0,
        })
    }

    /// Square grid of side `extent` sampled every `step`, endpoints included
    /// (`N = extent / step + 1` per axis).
    pub fn square(extent: f64, step: f64, d: f64) -> Result<Self> {
        if !(step > 0.0) || !(extent > 0.0) {
            return Err(Error::domain("extent and step must be positive"));
        }
        let n = (extent / step).round() as usize + 1;
        Self::new(n, n, step, step, d)
    }

    pub fn with_offset(mut self, offset_x: f64, offset_y: f64) -> Self {
        self.offset_x = offset_x;
        self.offset_y = offset_y;
        self
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn n_y(&self) -> usize {
        self.n_y
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn dy(&self) -> f64 {
        self.dy
    }

    /// Standoff distance between the antenna and the scan plane.
    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn offset(&self) -> (f64, f64) {
        (self.offset_x, self.offset_y)
    }

    /// Total number of samples `N = N_x N_y`.
    pub fn len(&self) -> usize {
        self.n_x * self.n_y
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `L_x = N_x Δx`.
    pub fn l_x(&self) -> f64 {
        self.n_x as f64 * self.dx
    }

    /// `L_y = N_y Δy`.
    pub fn l_y(&self) -> f64 {
        self.n_y as f64 * self.dy
    }

    /// Area weight of one sample.
    pub fn cell_area(&self) -> f64 {
        self.dx * self.dy
    }

    pub fn index(&self, ix: usize, iy: usize) -> usize {
        debug_assert!(ix < self.n_x && iy < self.n_y);
        ix + iy * self.n_x
    }

    pub fn grid_position(&self, n: usize) -> (usize, usize) {
        debug_assert!(n < self.len());
        (n % self.n_x, n / self.n_x)
    }

    pub fn x_at(&self, ix: usize) -> f64 {
        (ix as f64 - (self.n_x as f64 - 1.0) / 2.0) * self.dx + self.offset_x
    }

    pub fn y_at(&self, iy: usize) -> f64 {
        (iy as f64 - (self.n_y as f64 - 1.0) / 2.0) * self.dy + self.offset_y
    }

    /// Cartesian position `(x', y', d)` of sample `n`.
    pub fn point(&self, n: usize) -> [f64; 3] {
        let (ix, iy) = self.grid_position(n);
        [self.x_at(ix), self.y_at(iy), self.d]
    }

    /// Largest distance from the plane center to a sample, ignoring offset.
    pub fn max_radius(&self) -> f64 {
        let hx = (self.n_x as f64 - 1.0) / 2.0 * self.dx;
        let hy = (self.n_y as f64 - 1.0) / 2.0 * self.dy;
        hx.hypot(hy) + self.offset_x.hypot(self.offset_y)
    }
}

/// Which tangential components were captured by the probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolarizationMode {
    Both,
    /// Only `E_x` measured; `E_y` is zero-filled.
    MajorXOnly,
    /// Only `E_y` measured; `E_x` is zero-filled.
    MajorYOnly,
}

impl PolarizationMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            PolarizationMode::Both => "both",
            PolarizationMode::MajorXOnly => "major_x_only",
            PolarizationMode::MajorYOnly => "major_y_only",
        }
    }

    pub fn has_x(&self) -> bool {
        !matches!(self, PolarizationMode::MajorYOnly)
    }

    pub fn has_y(&self) -> bool {
        !matches!(self, PolarizationMode::MajorXOnly)
    }
}

impl fmt::Display for PolarizationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for PolarizationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "both" => Ok(PolarizationMode::Both),
            "major_x_only" => Ok(PolarizationMode::MajorXOnly),
            "major_y_only" => Ok(PolarizationMode::MajorYOnly),
            other => Err(Error::domain(format!("unknown polarization mode `{other}`"))),
        }
    }
}

/// Complex tangential electric field sampled on a [`ScanGeometry`].
#[derive(Debug, Clone, PartialEq)]
pub struct NearFieldScan {
    label: String,
    geometry: ScanGeometry,
    frequency: f64,
    e_x: Vec<Complex64>,
    e_y: Vec<Complex64>,
    mode: PolarizationMode,
}

impl NearFieldScan {
    /// Build a scan from both measured components.
    ///
    /// In a `major_*_only` mode the absent component must already be all
    /// zeros; it is rejected otherwise rather than being silently dropped.
    pub fn new(
        geometry: ScanGeometry,
        frequency: f64,
        e_x: Vec<Complex64>,
        e_y: Vec<Complex64>,
        mode: PolarizationMode,
    ) -> Result<Self> {
        wavenumber(frequency)?;
        let n = geometry.len();
        if e_x.len() != n || e_y.len() != n {
            return Err(Error::contract(format!(
                "scan expects {n} samples per component, got E_x={} E_y={}",
                e_x.len(),
                e_y.len()
            )));
        }
        let zero = Complex64::new(0.0, 0.0);
        if !mode.has_x() && e_x.iter().any(|v| *v != zero) {
            return Err(Error::contract("E_x must be zero-filled in major_y_only mode"));
        }
        if !mode.has_y() && e_y.iter().any(|v| *v != zero) {
            return Err(Error::contract("E_y must be zero-filled in major_x_only mode"));
        }
        Ok(Self {
            label: String::new(),
            geometry,
            frequency,
            e_x,
            e_y,
            mode,
        })
    }

    /// Keep only the major component, zero-filling the other one.
    pub fn major_only(&self, mode: PolarizationMode) -> Self {
        let mut out = self.clone();
        let zero = Complex64::new(0.0, 0.0);
        if !mode.has_x() {
            out.e_x.iter_mut().for_each(|v| *v = zero);
        }
        if !mode.has_y() {
            out.e_y.iter_mut().for_each(|v| *v = zero);
        }
        out.mode = match (self.mode, mode) {
            (PolarizationMode::Both, m) => m,
            (m, PolarizationMode::Both) => m,
            (a, b) if a == b => a,
            // Opposite majors leave nothing; keep the requested flag.
            (_, b) => b,
        };
        out
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Port label, empty when unknown.
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn geometry(&self) -> &ScanGeometry {
        &self.geometry
    }

    pub fn frequency(&self) -> f64 {
        self.frequency
    }

    pub fn e_x(&self) -> &[Complex64] {
        &self.e_x
    }

    pub fn e_y(&self) -> &[Complex64] {
        &self.e_y
    }

    pub fn polarization_mode(&self) -> PolarizationMode {
        self.mode
    }

    pub(crate) fn map_fields(&self, mut f: impl FnMut(usize, Complex64) -> Complex64) -> Self {
        let mut out = self.clone();
        for (n, v) in out.e_x.iter_mut().enumerate() {
            *v = f(n, *v);
        }
        for (n, v) in out.e_y.iter_mut().enumerate() {
            *v = f(n, *v);
        }
        out
    }
}

/// A far-field observation direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    pub theta: f64,
    pub phi: f64,
}

impl Direction {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    pub fn unit(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// Cartesian far point `(x_far, y_far, z_far)` at radius `r`.
    pub fn cartesian(&self, r: f64) -> [f64; 3] {
        let u = self.unit();
        [r * u[0], r * u[1], r * u[2]]
    }

    /// Great-circle angle to another direction.
    pub fn angle_to(&self, other: &Direction) -> f64 {
        let a = self.unit();
        let b = other.unit();
        let dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        let cross = [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ];
        let sin = (cross[0].powi(2) + cross[1].powi(2) + cross[2].powi(2)).sqrt();
        sin.atan2(dot)
    }
}

/// `E_θ` / `E_φ` samples of one port on a shared direction grid at radius `r`.
/// The radial component is not kept.
#[derive(Debug, Clone, PartialEq)]
pub struct FarFieldPattern {
    pub label: String,
    pub grid: Arc<SphericalGrid>,
    pub r: f64,
    pub frequency: f64,
    pub e_theta: Vec<Complex64>,
    pub e_phi: Vec<Complex64>,
}

impl FarFieldPattern {
    pub fn new(
        label: impl Into<String>,
        grid: Arc<SphericalGrid>,
        r: f64,
        frequency: f64,
        e_theta: Vec<Complex64>,
        e_phi: Vec<Complex64>,
    ) -> Result<Self> {
        let k = grid.len();
        if e_theta.len() != k || e_phi.len() != k {
            return Err(Error::contract(format!(
                "pattern expects {k} samples per component, got E_theta={} E_phi={}",
                e_theta.len(),
                e_phi.len()
            )));
        }
        if !(r > 0.0) {
            return Err(Error::domain(format!("far radius must be positive, got {r}")));
        }
        wavenumber(frequency)?;
        Ok(Self {
            label: label.into(),
            grid,
            r,
            frequency,
            e_theta,
            e_phi,
        })
    }

    pub fn len(&self) -> usize {
        self.e_theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.e_theta.is_empty()
    }

    /// `sqrt(|E_θ|² + |E_φ|²)` per direction.
    pub fn magnitude(&self) -> Vec<f64> {
        self.e_theta
            .iter()
            .zip(&self.e_phi)
            .map(|(a, b)| (a.norm_sqr() + b.norm_sqr()).sqrt())
            .collect()
    }

    /// Realized gain in dBi per direction, assuming 1 W accepted power.
    pub fn realized_gain_dbi(&self) -> Vec<f64> {
        self.magnitude()
            .into_iter()
            .map(|m| field_to_dbi(m, self.r))
            .collect()
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        out.e_theta.iter_mut().for_each(|v| *v *= factor);
        out.e_phi.iter_mut().for_each(|v| *v *= factor);
        out
    }
}

/// Realized gain `4π r² |E|² / (2 η0 P)` in dBi for a field magnitude `|E|`
/// at radius `r` and accepted power `P = 1 W`.
pub fn field_to_dbi(magnitude: f64, r: f64) -> f64 {
    20.0 * magnitude.log10() + dbi_offset(r)
}

/// Additive dB constant turning `20 log10 |E|` into dBi at radius `r`.
pub fn dbi_offset(r: f64) -> f64 {
    10.0 * (4.0 * PI * r * r / (2.0 * ETA0)).log10()
}

/// Dielectric properties of a reference material.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialConstants {
    pub name: &'static str,
    pub epsilon_r: f64,
    /// Conductivity in S/m.
    pub sigma: f64,
    pub frequency: f64,
}

impl MaterialConstants {
    /// Dry human skin at 28 GHz.
    pub const DRY_SKIN_28GHZ: MaterialConstants = MaterialConstants {
        name: "dry skin",
        epsilon_r: 16.55,
        sigma: 25.82,
        frequency: 28e9,
    };

    /// Dry human skin at 39 GHz.
    pub const DRY_SKIN_39GHZ: MaterialConstants = MaterialConstants {
        name: "dry skin",
        epsilon_r: 11.98,
        sigma: 31.43,
        frequency: 39e9,
    };

    pub fn table() -> &'static [MaterialConstants] {
        &[Self::DRY_SKIN_28GHZ, Self::DRY_SKIN_39GHZ]
    }

    /// Nearest tabulated entry for a frequency.
    pub fn dry_skin(frequency: f64) -> &'static MaterialConstants {
        Self::table()
            .iter()
            .min_by(|a, b| {
                (a.frequency - frequency)
                    .abs()
                    .total_cmp(&(b.frequency - frequency).abs())
            })
            .expect("table is non-empty")
    }

    /// Complex relative permittivity `ε_r - j σ / (ω ε0)`.
    pub fn complex_permittivity(&self) -> Complex64 {
        const EPS0: f64 = 8.854_187_812_8e-12;
        let omega = 2.0 * PI * self.frequency;
        Complex64::new(self.epsilon_r, -self.sigma / (omega * EPS0))
    }
}
