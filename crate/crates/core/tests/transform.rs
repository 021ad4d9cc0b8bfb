mod common;

use std::f64::consts::PI;
use std::sync::Arc;

use common::*;
use nf2ff::synthetic::{sample_near_field, table1_preset, Band, Orientation, PointSource, Scenario};
use nf2ff::transform::{
    assemble_operator, equivalent_currents, transform, transform_scan, EquivalentCurrents, KernelForm,
    RadiationKernel,
};
use nf2ff::{make_spherical_grid, wavelength, wavenumber, Direction, NearFieldScan, PolarizationMode, ScanGeometry};
use proptest::prelude::*;

fn random_scan(seed: u64, geometry: ScanGeometry, frequency: f64) -> NearFieldScan {
    let mut r = rng(seed);
    let n = geometry.len();
    let ex = random_complex(&mut r, n);
    let ey = random_complex(&mut r, n);
    NearFieldScan::new(geometry, frequency, ex, ey, PolarizationMode::Both).unwrap()
}

#[test]
fn matches_brute_force_double_loop() {
    let geometry = ScanGeometry::new(5, 5, 0.004, 0.005, 0.02).unwrap().with_offset(0.001, -0.0005);
    let scan = random_scan(7, geometry, 28e9);
    let grid = Arc::new(make_spherical_grid(50, PI / 2.0).unwrap());
    assert!(grid.len() <= 50);
    let far = transform_scan(&scan, grid.clone(), 2.0, KernelForm::Printed).unwrap();
    let (et, ep) = brute_force_far_field(&scan, grid.directions(), 2.0);
    assert!(max_rel_diff(&far.e_theta, &et) < 1e-12);
    assert!(max_rel_diff(&far.e_phi, &ep) < 1e-12);

    let op = assemble_operator(&geometry, grid, 2.0, wavenumber(28e9).unwrap()).unwrap();
    let explicit = transform(&equivalent_currents(&scan), &op).unwrap();
    assert!(max_rel_diff(&explicit.e_theta, &et) < 1e-12);
    assert!(max_rel_diff(&explicit.e_phi, &ep) < 1e-12);
}

#[test]
fn preset_operator_shape() {
    let p = table1_preset(Band::Ghz28, Scenario::FreeSpace);
    let grid = Arc::new(make_spherical_grid(4000, p.theta_max).unwrap());
    let kernel = RadiationKernel::new(p.geometry, grid, 2.0, wavenumber(p.frequency).unwrap(), KernelForm::Printed).unwrap();
    assert_eq!(kernel.shape(), (4000, 6561));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn transform_is_linear(seed in 0u64..1_000_000, ar in -3.0..3.0f64, ai in -3.0..3.0f64, br in -3.0..3.0f64, bi in -3.0..3.0f64) {
        let geometry = ScanGeometry::new(6, 4, 0.005, 0.005, 0.02).unwrap();
        let (a, b) = (c(ar, ai), c(br, bi));
        let m1 = equivalent_currents(&random_scan(seed, geometry, 39e9));
        let m2 = equivalent_currents(&random_scan(seed + 1, geometry, 39e9));
        let mix = m1.combine(a, &m2, b).unwrap();
        let grid = Arc::new(make_spherical_grid(30, 1.0).unwrap());
        let kernel = RadiationKernel::new(geometry, grid, 2.0, wavenumber(39e9).unwrap(), KernelForm::Printed).unwrap();
        let out = kernel.transform_many(&[m1, m2, mix]).unwrap();
        let lin_t: Vec<_> = out[0].e_theta.iter().zip(&out[1].e_theta).map(|(x, y)| a * x + b * y).collect();
        let lin_p: Vec<_> = out[0].e_phi.iter().zip(&out[1].e_phi).map(|(x, y)| a * x + b * y).collect();
        prop_assert!(max_rel_diff(&out[2].e_theta, &lin_t) < 1e-10);
        prop_assert!(max_rel_diff(&out[2].e_phi, &lin_p) < 1e-10);
    }
}

#[test]
fn scaling_currents_scales_the_field() {
    let geometry = ScanGeometry::new(4, 4, 0.005, 0.005, 0.02).unwrap();
    let m = equivalent_currents(&random_scan(3, geometry, 28e9));
    let a = c(-0.3, 1.7);
    let zero = EquivalentCurrents {
        m_x: vec![c(0.0, 0.0); m.len()],
        m_y: vec![c(0.0, 0.0); m.len()],
        ..m.clone()
    };
    let scaled = m.combine(a, &zero, c(0.0, 0.0)).unwrap();
    let grid = Arc::new(make_spherical_grid(20, 1.0).unwrap());
    let kernel = RadiationKernel::new(geometry, grid, 2.0, wavenumber(28e9).unwrap(), KernelForm::Printed).unwrap();
    let out = kernel.transform_many(&[m, scaled, zero]).unwrap();
    let expect: Vec<_> = out[0].e_theta.iter().map(|v| a * v).collect();
    assert!(max_rel_diff(&out[1].e_theta, &expect) < 1e-14);
    assert!(out[2].e_theta.iter().chain(&out[2].e_phi).all(|v| v.norm() == 0.0));
}

/// Gaussian-tapered E_x aperture of 1/e radius `w`; negligible at the
/// scan edges, so truncation does not enter.
fn gaussian_aperture(step: f64, w: f64) -> NearFieldScan {
    let g = ScanGeometry::square(0.1, step, 0.02).unwrap();
    let ex = (0..g.len())
        .map(|n| {
            let p = g.point(n);
            c((-(p[0] * p[0] + p[1] * p[1]) / (w * w)).exp(), 0.0)
        })
        .collect();
    NearFieldScan::new(g, 28e9, ex, vec![c(0.0, 0.0); g.len()], PolarizationMode::Both).unwrap()
}

fn boresight(scan: &NearFieldScan, r: f64, form: KernelForm) -> f64 {
    let grid = grid_from(vec![Direction::new(0.0, 0.0)], 0.1);
    let p = transform_scan(scan, grid, r, form).unwrap();
    p.magnitude()[0]
}

#[test]
fn normalized_kernel_decays_as_one_over_r() {
    let scan = gaussian_aperture(0.005, wavelength(28e9).unwrap());
    let ratio = boresight(&scan, 2.0, KernelForm::Normalized) / boresight(&scan, 4.0, KernelForm::Normalized);
    assert!((1.98..=2.02).contains(&ratio), "ratio {ratio}");
}

#[test]
fn printed_kernel_level_is_range_independent() {
    // The closed-form entries carry no 1/R of their own, so the far level
    // does not fall with r.
    let scan = gaussian_aperture(0.005, wavelength(28e9).unwrap());
    let ratio = boresight(&scan, 2.0, KernelForm::Printed) / boresight(&scan, 4.0, KernelForm::Printed);
    assert!((ratio - 1.0).abs() < 0.01, "ratio {ratio}");
}

#[test]
fn halving_the_step_barely_moves_boresight() {
    let w = wavelength(28e9).unwrap();
    let coarse = boresight(&gaussian_aperture(0.005, w), 2.0, KernelForm::Printed);
    let fine = boresight(&gaussian_aperture(0.0025, w), 2.0, KernelForm::Printed);
    let db = 20.0 * (coarse / fine).log10();
    assert!(db.abs() < 0.1, "{db} dB");
}

#[test]
fn x_symmetric_scan_gives_mirrored_pattern() {
    let f = 39e9;
    let l = wavelength(f).unwrap();
    let src = [
        PointSource::new([0.0, 0.3 * l, 0.0], c(1.0, 0.2), Orientation::Y).unwrap(),
        PointSource::new([-0.6 * l, -0.1 * l, 0.0], c(0.5, -0.4), Orientation::Y).unwrap(),
        PointSource::new([0.6 * l, -0.1 * l, 0.0], c(0.5, -0.4), Orientation::Y).unwrap(),
    ];
    let scan = sample_near_field(&src, &ScanGeometry::square(0.12, 0.004, 0.02).unwrap(), f).unwrap();
    let mut dirs = Vec::new();
    for i in 1..12 {
        let t = i as f64 * 0.09;
        for j in 0..16 {
            let p = j as f64 * 2.0 * PI / 16.0 + 0.05;
            dirs.push(Direction::new(t, p));
            dirs.push(Direction::new(t, PI - p));
        }
    }
    let grid = grid_from(dirs, 1.1);
    let m = transform_scan(&scan, grid, 2.0, KernelForm::Printed).unwrap().magnitude();
    let peak = m.iter().cloned().fold(0.0, f64::max);
    for pair in m.chunks(2) {
        assert!((pair[0] - pair[1]).abs() <= 1e-8 * peak, "{pair:?}");
    }
}

#[test]
fn uniform_aperture_first_null() {
    let f = 28e9;
    let l = wavelength(f).unwrap();
    let geometry = ScanGeometry::new(41, 41, l / 4.0, l / 4.0, 0.02).unwrap();
    let n = geometry.len();
    let scan = NearFieldScan::new(geometry, f, vec![c(1.0, 0.0); n], vec![c(0.0, 0.0); n], PolarizationMode::Both).unwrap();
    let step = 0.05f64.to_radians();
    let dirs: Vec<_> = (0..800).map(|i| Direction::new(i as f64 * step, 0.0)).collect();
    let grid = grid_from(dirs, 800.0 * step);
    let m = transform_scan(&scan, grid.clone(), 100.0, KernelForm::Printed).unwrap().magnitude();
    let argmax = m.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
    assert_eq!(argmax, 0);
    let null = (1..m.len() - 1).find(|&i| m[i] < m[i - 1] && m[i] <= m[i + 1]).unwrap();
    let theta = grid.directions()[null].theta;
    let expect = (l / geometry.l_x()).asin();
    assert!((theta - expect).abs() <= step, "null at {:.3}°, expected {:.3}°", theta.to_degrees(), expect.to_degrees());
}

#[test]
fn mismatched_frequency_is_a_contract_error() {
    let geometry = ScanGeometry::new(3, 3, 0.005, 0.005, 0.02).unwrap();
    let m = equivalent_currents(&random_scan(1, geometry, 28e9));
    let grid = Arc::new(make_spherical_grid(10, 1.0).unwrap());
    let kernel = RadiationKernel::new(geometry, grid, 2.0, wavenumber(39e9).unwrap(), KernelForm::Printed).unwrap();
    assert!(matches!(kernel.transform_many(&[m]), Err(nf2ff::Error::Contract(_))));
}
