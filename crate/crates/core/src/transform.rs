//! Planar near-field to far-field transformation.
//!
//! The scan plane `z = d` is replaced by equivalent magnetic currents
//! `M = -ẑ × E`, i.e. `M_x = E_y` and `M_y = -E_x`. The far field at point
//! `k` is a discrete sum over the `N` samples:
//!
//! ```text
//! E_θ,k = Σ_n H11[k,n] M_x[n] + H12[k,n] M_y[n]
//! E_φ,k = Σ_n H21[k,n] M_x[n] + H22[k,n] M_y[n]
//!
//! H11 =  ( cosθ sinφ (z_far - d) + sinθ (y_far - y') ) G'(R) Δx Δy
//! H12 = -( cosθ cosφ (z_far - d) + sinθ (x_far - x') ) G'(R) Δx Δy
//! H21 =    cosφ (z_far - d)                              G'(R) Δx Δy
//! H22 =    sinφ (z_far - d)                              G'(R) Δx Δy
//!
//! G'(R) = exp(-j k0 R) / (4π R) · (j k0 + 1/R)
//! ```
//!
//! Time convention is `exp(+jωt)`: outgoing waves carry `exp(-j k0 R)`.
//!
//! With [`KernelForm::Printed`] the bracketed geometric factors are raw
//! coordinate differences, so the far-zone level does not fall off with
//! range and the absolute scale is absorbed by loss de-embedding.
//! [`KernelForm::Normalized`] divides every entry by `R`, which turns the
//! brackets into unit-vector components and gives the usual `1/r` decay.

use std::f64::consts::PI;
use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fields::{FarFieldPattern, NearFieldScan, ScanGeometry, C0};
use crate::grid::SphericalGrid;

/// Default far-field radius in meters.
pub const DEFAULT_FAR_RADIUS: f64 = 2.0;

/// Equivalent magnetic surface currents on the scan plane.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalentCurrents {
    pub label: String,
    pub geometry: ScanGeometry,
    pub frequency: f64,
    pub m_x: Vec<Complex64>,
    pub m_y: Vec<Complex64>,
}

impl EquivalentCurrents {
    pub fn len(&self) -> usize {
        self.m_x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.m_x.is_empty()
    }

    /// `a·self + b·other`, for linearity checks and source superposition.
    pub fn combine(&self, a: Complex64, other: &EquivalentCurrents, b: Complex64) -> Result<Self> {
        if self.geometry != other.geometry || self.len() != other.len() {
            return Err(Error::contract("currents live on different scan geometries"));
        }
        let mix = |u: &[Complex64], v: &[Complex64]| -> Vec<Complex64> {
            u.iter().zip(v).map(|(p, q)| a * p + b * q).collect()
        };
        Ok(Self {
            label: self.label.clone(),
            geometry: self.geometry,
            frequency: self.frequency,
            m_x: mix(&self.m_x, &other.m_x),
            m_y: mix(&self.m_y, &other.m_y),
        })
    }
}

/// `M = -ẑ × E`: `M_x = E_y`, `M_y = -E_x`.
pub fn equivalent_currents(scan: &NearFieldScan) -> EquivalentCurrents {
    EquivalentCurrents {
        label: scan.label().to_string(),
        geometry: *scan.geometry(),
        frequency: scan.frequency(),
        m_x: scan.e_y().to_vec(),
        m_y: scan.e_x().iter().map(|e| -e).collect(),
    }
}

/// Derivative factor of the free-space Green's function,
/// `exp(-j k0 R) / (4π R) · (j k0 + 1/R)`.
pub fn green_prime(r: f64, k0: f64) -> Result<Complex64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::domain(format!("Green's function needs R > 0, got {r}")));
    }
    Ok(green_prime_unchecked(r, k0))
}

#[inline]
fn green_prime_unchecked(r: f64, k0: f64) -> Complex64 {
    let (s, c) = (k0 * r).sin_cos();
    let phase = Complex64::new(c, -s);
    phase / (4.0 * PI * r) * Complex64::new(1.0 / r, k0)
}

/// How the geometric factors of the operator are scaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KernelForm {
    /// Coordinate differences times `G'(R)`, as in the closed-form entries above.
    #[default]
    Printed,
    /// Same entries divided by `R`, the exact curl of the Green's function.
    Normalized,
}

/// Geometry and wavenumber needed to evaluate operator entries on demand.
///
/// This is the cheap part of the operator: per-direction trigonometry,
/// per-sample coordinates and constants. Entries are computed row by row,
/// so it can transform any number of ports without storing the `K x N`
/// blocks.
#[derive(Debug, Clone)]
pub struct RadiationKernel {
    geometry: ScanGeometry,
    grid: Arc<SphericalGrid>,
    r: f64,
    k0: f64,
    form: KernelForm,
    rows: Vec<FarRow>,
    xs: Vec<f64>,
    ys: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
struct FarRow {
    x: f64,
    y: f64,
    z_minus_d: f64,
    sin_t: f64,
    cos_t_sin_p: f64,
    cos_t_cos_p: f64,
    cos_p: f64,
    sin_p: f64,
}

impl RadiationKernel {
    pub fn new(
        geometry: ScanGeometry,
        grid: Arc<SphericalGrid>,
        r: f64,
        k0: f64,
        form: KernelForm,
    ) -> Result<Self> {
        if !(k0 >= 0.0) || !k0.is_finite() {
            return Err(Error::domain(format!("wavenumber must be non-negative, got {k0}")));
        }
        if !(r > geometry.d() + geometry.max_radius()) {
            return Err(Error::geometry(format!(
                "far radius {r} m must exceed d + scan radius = {} m",
                geometry.d() + geometry.max_radius()
            )));
        }
        let d = geometry.d();
        let rows = grid
            .directions()
            .iter()
            .map(|dir| {
                let (st, ct) = dir.theta.sin_cos();
                let (sp, cp) = dir.phi.sin_cos();
                let p = dir.cartesian(r);
                FarRow {
                    x: p[0],
                    y: p[1],
                    z_minus_d: p[2] - d,
                    sin_t: st,
                    cos_t_sin_p: ct * sp,
                    cos_t_cos_p: ct * cp,
                    cos_p: cp,
                    sin_p: sp,
                }
            })
            .collect();
        let xs = (0..geometry.len()).map(|n| geometry.point(n)[0]).collect();
        let ys = (0..geometry.len()).map(|n| geometry.point(n)[1]).collect();
        Ok(Self {
            geometry,
            grid,
            r,
            k0,
            form,
            rows,
            xs,
            ys,
        })
    }

    pub fn geometry(&self) -> &ScanGeometry {
        &self.geometry
    }

    pub fn grid(&self) -> &Arc<SphericalGrid> {
        &self.grid
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn k0(&self) -> f64 {
        self.k0
    }

    pub fn form(&self) -> KernelForm {
        self.form
    }

    pub fn frequency(&self) -> f64 {
        self.k0 * C0 / (2.0 * PI)
    }

    /// `(K, N)` shape of each operator block.
    pub fn shape(&self) -> (usize, usize) {
        (self.rows.len(), self.xs.len())
    }

    /// `[H11, H12, H21, H22]` at far point `k`, sample `n`.
    #[inline]
    pub fn entries(&self, k: usize, n: usize) -> [Complex64; 4] {
        let row = &self.rows[k];
        let dx = row.x - self.xs[n];
        let dy = row.y - self.ys[n];
        let dz = row.z_minus_d;
        let r = (dx * dx + dy * dy + dz * dz).sqrt();
        let mut g = green_prime_unchecked(r, self.k0) * self.geometry.cell_area();
        if self.form == KernelForm::Normalized {
            g /= r;
        }
        [
            g * (row.cos_t_sin_p * dz + row.sin_t * dy),
            -g * (row.cos_t_cos_p * dz + row.sin_t * dx),
            g * (row.cos_p * dz),
            g * (row.sin_p * dz),
        ]
    }

    fn fill_row(&self, k: usize, h11: &mut [Complex64], h12: &mut [Complex64], h21: &mut [Complex64], h22: &mut [Complex64]) {
        for n in 0..self.xs.len() {
            let [a, b, c, d] = self.entries(k, n);
            h11[n] = a;
            h12[n] = b;
            h21[n] = c;
            h22[n] = d;
        }
    }

    fn check(&self, currents: &EquivalentCurrents) -> Result<()> {
        if currents.geometry != self.geometry || currents.len() != self.geometry.len() {
            return Err(Error::contract(
                "currents and operator were built for different scan geometries",
            ));
        }
        let f = self.frequency();
        if ((currents.frequency - f) / f).abs() > 1e-9 {
            return Err(Error::contract(format!(
                "currents at {} Hz but operator built for {f} Hz",
                currents.frequency
            )));
        }
        Ok(())
    }

    /// Transform several ports at once, evaluating each operator row once
    /// and applying it to every port. Nothing of size `K x N` is stored.
    pub fn transform_many(&self, ports: &[EquivalentCurrents]) -> Result<Vec<FarFieldPattern>> {
        for p in ports {
            self.check(p)?;
        }
        let m = ports.len();
        let n_src = self.geometry.len();
        let rows: Vec<Vec<(Complex64, Complex64)>> = (0..self.rows.len())
            .into_par_iter()
            .map(|k| {
                let mut acc = vec![(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)); m];
                for n in 0..n_src {
                    let [h11, h12, h21, h22] = self.entries(k, n);
                    for (a, p) in acc.iter_mut().zip(ports) {
                        let (mx, my) = (p.m_x[n], p.m_y[n]);
                        a.0 += h11 * mx + h12 * my;
                        a.1 += h21 * mx + h22 * my;
                    }
                }
                acc
            })
            .collect();
        ports
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let (et, ep) = rows.iter().map(|r| r[i]).unzip();
                FarFieldPattern::new(p.label.clone(), self.grid.clone(), self.r, p.frequency, et, ep)
            })
            .collect()
    }

    /// Assemble the four dense `K x N` blocks.
    pub fn assemble(&self) -> RadiationOperator {
        let (k, n) = (self.rows.len(), self.geometry.len());
        let zero = Complex64::new(0.0, 0.0);
        let mut h11 = vec![zero; k * n];
        let mut h12 = vec![zero; k * n];
        let mut h21 = vec![zero; k * n];
        let mut h22 = vec![zero; k * n];
        h11.par_chunks_mut(n)
            .zip(h12.par_chunks_mut(n))
            .zip(h21.par_chunks_mut(n))
            .zip(h22.par_chunks_mut(n))
            .enumerate()
            .for_each(|(row, (((a, b), c), d))| self.fill_row(row, a, b, c, d));
        let shape = (k, n);
        RadiationOperator {
            kernel: self.clone(),
            h11: Array2::from_shape_vec(shape, h11).expect("row-major K x N"),
            h12: Array2::from_shape_vec(shape, h12).expect("row-major K x N"),
            h21: Array2::from_shape_vec(shape, h21).expect("row-major K x N"),
            h22: Array2::from_shape_vec(shape, h22).expect("row-major K x N"),
        }
    }
}

/// The discretized radiation operator as four explicit `K x N` blocks.
///
/// Memory is `64 K N` bytes; a 4000 x 6561 operator takes about 1.7 GB. For
/// large problems prefer [`RadiationKernel::transform_many`], which gives
/// bitwise identical results without storing the blocks.
#[derive(Debug, Clone)]
pub struct RadiationOperator {
    kernel: RadiationKernel,
    h11: Array2<Complex64>,
    h12: Array2<Complex64>,
    h21: Array2<Complex64>,
    h22: Array2<Complex64>,
}

impl RadiationOperator {
    pub fn h11(&self) -> &Array2<Complex64> {
        &self.h11
    }

    pub fn h12(&self) -> &Array2<Complex64> {
        &self.h12
    }

    pub fn h21(&self) -> &Array2<Complex64> {
        &self.h21
    }

    pub fn h22(&self) -> &Array2<Complex64> {
        &self.h22
    }

    pub fn kernel(&self) -> &RadiationKernel {
        &self.kernel
    }

    /// `(K, N)` shape shared by the four blocks.
    pub fn shape(&self) -> (usize, usize) {
        self.h11.dim()
    }

    pub fn k0(&self) -> f64 {
        self.kernel.k0
    }

    pub fn r(&self) -> f64 {
        self.kernel.r
    }
}

/// Assemble the operator for a scan geometry and far grid with the printed
/// kernel form.
pub fn assemble_operator(
    geometry: &ScanGeometry,
    grid: Arc<SphericalGrid>,
    r: f64,
    k0: f64,
) -> Result<RadiationOperator> {
    Ok(RadiationKernel::new(*geometry, grid, r, k0, KernelForm::Printed)?.assemble())
}

/// Apply an assembled operator to one set of currents.
pub fn transform(currents: &EquivalentCurrents, op: &RadiationOperator) -> Result<FarFieldPattern> {
    op.kernel.check(currents)?;
    let (k, n) = op.shape();
    fn rows(block: &Array2<Complex64>, n: usize) -> rayon::slice::Chunks<'_, Complex64> {
        block.as_slice().expect("standard layout").par_chunks(n)
    }
    let (e_theta, e_phi): (Vec<Complex64>, Vec<Complex64>) = rows(&op.h11, n)
        .zip(rows(&op.h12, n))
        .zip(rows(&op.h21, n))
        .zip(rows(&op.h22, n))
        .map(|(((h11, h12), h21), h22)| {
            let zero = Complex64::new(0.0, 0.0);
            let mut et = zero;
            let mut ep = zero;
            for i in 0..n {
                let (mx, my) = (currents.m_x[i], currents.m_y[i]);
                et += h11[i] * mx + h12[i] * my;
                ep += h21[i] * mx + h22[i] * my;
            }
            (et, ep)
        })
        .unzip();
    debug_assert_eq!(e_theta.len(), k);
    FarFieldPattern::new(
        currents.label.clone(),
        op.kernel.grid.clone(),
        op.kernel.r,
        currents.frequency,
        e_theta,
        e_phi,
    )
}

/// Scan → currents → far field, without storing the operator.
pub fn transform_scan(
    scan: &NearFieldScan,
    grid: Arc<SphericalGrid>,
    r: f64,
    form: KernelForm,
) -> Result<FarFieldPattern> {
    let k0 = crate::fields::wavenumber(scan.frequency())?;
    let kernel = RadiationKernel::new(*scan.geometry(), grid, r, k0, form)?;
    let mut out = kernel.transform_many(&[equivalent_currents(scan)])?;
    Ok(out.remove(0))
}
