mod common;

use std::sync::Arc;

use common::*;
use nf2ff::calibration::{apply_calibration, CalibrationDirection, PortCalibration};
use nf2ff::synthesis::{magnitude_sums, spherical_coverage, CoverageResult, PortPatternSet};
use nf2ff::synthetic::{analytic_far_field, linear_array_ports, table1_preset, Band, Scenario};
use nf2ff::transform::{equivalent_currents, KernelForm, RadiationKernel};
use nf2ff::{make_spherical_grid, wavenumber, FarFieldPattern, SphericalGrid};
use num_complex::Complex64;
use proptest::prelude::*;

fn random_ports(seed: u64, m: usize, grid: &Arc<SphericalGrid>) -> Vec<FarFieldPattern> {
    let mut r = rng(seed);
    (0..m)
        .map(|i| {
            let et = random_complex(&mut r, grid.len());
            let ep = random_complex(&mut r, grid.len());
            FarFieldPattern::new(format!("p{i}"), grid.clone(), 2.0, 28e9, et, ep).unwrap()
        })
        .collect()
}

fn coverage(ports: Vec<FarFieldPattern>) -> CoverageResult {
    spherical_coverage(&PortPatternSet::new(ports).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn port_phase_does_not_change_gain(seed in 0u64..1_000_000, m in 1usize..6, alpha in -7.0..7.0f64, which in 0usize..6) {
        let grid = Arc::new(make_spherical_grid(60, 1.0).unwrap());
        let ports = random_ports(seed, m, &grid);
        let mut rotated = ports.clone();
        let w = which % m;
        rotated[w] = rotated[w].scaled(Complex64::from_polar(1.0, alpha));
        let a = coverage(ports);
        let b = coverage(rotated);
        for (x, y) in a.g_hat().iter().zip(b.g_hat()) {
            prop_assert!((x - y).abs() <= 1e-14 * x.max(1.0));
        }
    }

    #[test]
    fn port_order_does_not_change_result(seed in 0u64..1_000_000, m in 2usize..7, rot in 1usize..7) {
        let grid = Arc::new(make_spherical_grid(60, 1.0).unwrap());
        let ports = random_ports(seed, m, &grid);
        let mut shuffled = ports.clone();
        shuffled.rotate_left(rot % m);
        shuffled.swap(0, m - 1);
        prop_assert_eq!(coverage(ports), coverage(shuffled));
    }

    #[test]
    fn adding_a_port_never_lowers_the_magnitude_sum(seed in 0u64..1_000_000, m in 1usize..6) {
        let grid = Arc::new(make_spherical_grid(60, 1.0).unwrap());
        let ports = random_ports(seed, m + 1, &grid);
        let (t0, p0) = magnitude_sums(&PortPatternSet::new(ports[..m].to_vec()).unwrap());
        let (t1, p1) = magnitude_sums(&PortPatternSet::new(ports).unwrap());
        for i in 0..t0.len() {
            prop_assert!(t1[i] >= t0[i] && p1[i] >= p0[i]);
        }
    }

    #[test]
    fn scaling_all_ports_shifts_the_db_cdf(seed in 0u64..1_000_000, m in 1usize..5, s in 0.01..100.0f64) {
        let grid = Arc::new(make_spherical_grid(80, 1.0).unwrap());
        let ports = random_ports(seed, m, &grid);
        let scaled: Vec<_> = ports.iter().map(|p| p.scaled(Complex64::new(s, 0.0))).collect();
        let a = coverage(ports);
        let b = coverage(scaled);
        for (x, y) in a.g_hat().iter().zip(b.g_hat()) {
            prop_assert!((y - s * x).abs() <= 1e-13 * s * x);
        }
        let shift = 20.0 * s.log10();
        for p in [0.1, 0.25, 0.5, 0.75, 0.9, 1.0] {
            prop_assert!((b.percentile_dbi(p).unwrap() - a.percentile_dbi(p).unwrap() - shift).abs() < 1e-9);
            prop_assert_eq!(a.percentile_direction(p).unwrap(), b.percentile_direction(p).unwrap());
        }
    }

    #[test]
    fn cdf_is_a_proper_step_function(seed in 0u64..1_000_000, k in 1usize..300) {
        let mut r = rng(seed);
        let grid = Arc::new(make_spherical_grid(k, 1.2).unwrap());
        let gains: Vec<f64> = (0..grid.len()).map(|_| rand::Rng::gen_range(&mut r, 0.0..5.0f64).floor() * 0.25 + 0.01).collect();
        let res = CoverageResult::from_gains(grid.clone(), 2.0, gains.clone()).unwrap();
        let cdf = res.cdf();
        prop_assert_eq!(cdf.len(), gains.len());
        for w in cdf.windows(2) {
            prop_assert!(w[0].0 <= w[1].0 && w[0].1 < w[1].1);
        }
        prop_assert!(cdf.iter().all(|&(_, p)| p > 0.0 && p <= 1.0));
        prop_assert_eq!(cdf.last().unwrap().1, 1.0);
        let max = gains.iter().cloned().fold(f64::MIN, f64::max);
        let min = gains.iter().cloned().fold(f64::MAX, f64::min);
        prop_assert_eq!(res.cdf_at(max + 1e-9), 1.0);
        prop_assert_eq!(res.cdf_at(min - 1e-9), 0.0);

        // sort oracle: smallest g whose share of gains <= g reaches p
        let mut sorted = gains.clone();
        sorted.sort_by(f64::total_cmp);
        for p in [0.01, 0.1, 0.333, 0.5, 0.9, 0.999, 1.0] {
            let oracle = *sorted
                .iter()
                .find(|&&g| sorted.iter().filter(|&&v| v <= g).count() as f64 / sorted.len() as f64 >= p)
                .unwrap();
            prop_assert_eq!(res.percentile(p).unwrap(), oracle);
        }
    }
}

#[test]
fn array_median_matches_independent_sort() {
    let preset = table1_preset(Band::Ghz28, Scenario::FreeSpace);
    let (_, scans) = array_scans(4, &preset.geometry, preset.frequency, None);
    let grid = Arc::new(make_spherical_grid(500, preset.theta_max).unwrap());
    let kernel = RadiationKernel::new(
        preset.geometry,
        grid,
        2.0,
        wavenumber(preset.frequency).unwrap(),
        KernelForm::Printed,
    )
    .unwrap();
    let currents: Vec<_> = scans.iter().map(equivalent_currents).collect();
    let patterns = kernel.transform_many(&currents).unwrap();

    // recompute Ĝ with a plain loop and sort it
    let k = patterns[0].len();
    let mut g: Vec<f64> = (0..k)
        .map(|i| {
            let st: f64 = patterns.iter().map(|p| p.e_theta[i].norm()).sum::<f64>() / 2.0;
            let sp: f64 = patterns.iter().map(|p| p.e_phi[i].norm()).sum::<f64>() / 2.0;
            (st * st + sp * sp).sqrt()
        })
        .collect();
    g.sort_by(f64::total_cmp);
    let oracle = g[(k + 1) / 2 - 1];
    let res = coverage(patterns);
    assert!((res.percentile(0.5).unwrap() - oracle).abs() <= 1e-12 * oracle);
}

#[test]
fn calibration_phase_does_not_reach_the_coverage() {
    let grid = Arc::new(make_spherical_grid(300, 1.0).unwrap());
    let ports = linear_array_ports(4, 0.005, None).unwrap();
    let patterns: Vec<_> = ports
        .iter()
        .enumerate()
        .map(|(i, s)| analytic_far_field(format!("port{}", i + 1), s, grid.clone(), 2.0, 28e9).unwrap())
        .collect();
    let run = |phase: f64| {
        let de: Vec<_> = patterns
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let cal = PortCalibration::new(p.label.clone(), 90.0 + i as f64, phase * (i + 1) as f64);
                apply_calibration(p, &cal, CalibrationDirection::Deembed).unwrap()
            })
            .collect();
        coverage(de)
    };
    let a = run(0.0);
    let b = run(1.234);
    for (x, y) in a.g_hat().iter().zip(b.g_hat()) {
        assert!((x - y).abs() <= 1e-12 * x);
    }
}
