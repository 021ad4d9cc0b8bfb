#![allow(dead_code)]

use std::f64::consts::PI;
use std::sync::Arc;

use nf2ff::synthetic::{linear_array_ports, sample_near_field, PointSource};
use nf2ff::{Direction, NearFieldScan, ScanGeometry, SphericalGrid};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

/// Far field by a straight double loop over the closed-form operator
/// entries, written without the library's kernel code.
pub fn brute_force_far_field(
    scan: &NearFieldScan,
    dirs: &[Direction],
    r: f64,
) -> (Vec<Complex64>, Vec<Complex64>) {
    let g = scan.geometry();
    let k0 = 2.0 * PI * scan.frequency() / 299_792_458.0;
    let (ox, oy) = g.offset();
    let mut et = Vec::new();
    let mut ep = Vec::new();
    for dir in dirs {
        let (t, p) = (dir.theta, dir.phi);
        let xf = r * t.sin() * p.cos();
        let yf = r * t.sin() * p.sin();
        let zf = r * t.cos();
        let mut a = c(0.0, 0.0);
        let mut b = c(0.0, 0.0);
        for j in 0..g.n_y() {
            for i in 0..g.n_x() {
                let xs = ox + (i as f64 - (g.n_x() - 1) as f64 / 2.0) * g.dx();
                let ys = oy + (j as f64 - (g.n_y() - 1) as f64 / 2.0) * g.dy();
                let n = i + j * g.n_x();
                let mx = scan.e_y()[n];
                let my = -scan.e_x()[n];
                let (x, y, z) = (xf - xs, yf - ys, zf - g.d());
                let rr = (x * x + y * y + z * z).sqrt();
                let gp = c((k0 * rr).cos(), -(k0 * rr).sin()) * c(1.0 / rr, k0) / (4.0 * PI * rr);
                let w = gp * g.dx() * g.dy();
                let h11 = (t.cos() * p.sin() * z + t.sin() * y) * w;
                let h12 = -(t.cos() * p.cos() * z + t.sin() * x) * w;
                let h21 = p.cos() * z * w;
                let h22 = p.sin() * z * w;
                a += h11 * mx + h12 * my;
                b += h21 * mx + h22 * my;
            }
        }
        et.push(a);
        ep.push(b);
    }
    (et, ep)
}

/// Largest |a - b| relative to the largest |b|.
pub fn max_rel_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let scale = b.iter().map(|v| v.norm()).fold(0.0, f64::max);
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / scale
}

pub fn grid_from(dirs: Vec<Direction>, theta_max: f64) -> Arc<SphericalGrid> {
    Arc::new(SphericalGrid::from_directions(dirs, theta_max).unwrap())
}

/// Scans of an `m`-port λ/2 linear array on a geometry.
pub fn array_scans(
    m: usize,
    geometry: &ScanGeometry,
    frequency: f64,
    cross_pol_db: Option<f64>,
) -> (Vec<Vec<PointSource>>, Vec<NearFieldScan>) {
    let lambda = 299_792_458.0 / frequency;
    let ports = linear_array_ports(m, lambda / 2.0, cross_pol_db).unwrap();
    let scans = ports
        .iter()
        .enumerate()
        .map(|(i, s)| {
            sample_near_field(s, geometry, frequency)
                .unwrap()
                .with_label(format!("port{}", i + 1))
        })
        .collect();
    (ports, scans)
}
