//! Quasi-uniform direction grids over a polar cone `θ ≤ θ_max`.
//!
//! Directions are laid out on rings of constant θ. Ring `i` sits at
//! `θ_i = i Δθ` with `Δθ = θ_max / (n_rings - 1/2)`, so the outermost ring
//! represents the band that ends exactly at `θ_max`. The pole ring carries a
//! single point and ring `i > 0` carries `round(2π sin θ_i / δ)` points
//! starting at `φ = 0`, where the angular pitch `δ` starts at
//! `sqrt(cone solid angle / count)` and is refined by bisection until the
//! total is as close as possible to the requested count.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fields::Direction;

/// One ring of constant θ inside a [`SphericalGrid`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ring {
    pub theta: f64,
    /// Index of the first direction of this ring.
    pub start: usize,
    pub count: usize,
}

impl Ring {
    pub fn indices(&self) -> std::ops::Range<usize> {
        self.start..self.start + self.count
    }

    pub fn azimuth_step(&self) -> f64 {
        2.0 * PI / self.count as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SphericalGrid {
    directions: Vec<Direction>,
    rings: Vec<Ring>,
    theta_max: f64,
}

/// Default validity cone of a planar scanner.
pub const DEFAULT_THETA_MAX: f64 = PI / 3.0;

impl SphericalGrid {
    /// Build a grid from explicit directions. Consecutive directions that
    /// share the same θ form one ring.
    pub fn from_directions(directions: Vec<Direction>, theta_max: f64) -> Result<Self> {
        if directions.is_empty() {
            return Err(Error::domain("a grid needs at least one direction"));
        }
        if let Some(d) = directions.iter().find(|d| {
            !(d.theta >= 0.0 && d.theta <= theta_max) || !d.phi.is_finite()
        }) {
            return Err(Error::domain(format!(
                "direction θ={} outside [0, {theta_max}]",
                d.theta
            )));
        }
        let mut rings: Vec<Ring> = Vec::new();
        for (i, d) in directions.iter().enumerate() {
            match rings.last_mut() {
                Some(r) if r.theta == d.theta => r.count += 1,
                _ => rings.push(Ring {
                    theta: d.theta,
                    start: i,
                    count: 1,
                }),
            }
        }
        Ok(Self {
            directions,
            rings,
            theta_max,
        })
    }

    pub fn directions(&self) -> &[Direction] {
        &self.directions
    }

    pub fn rings(&self) -> &[Ring] {
        &self.rings
    }

    pub fn theta_max(&self) -> f64 {
        self.theta_max
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    /// Same directions, bit for bit.
    pub fn same_directions(&self, other: &SphericalGrid) -> bool {
        self.directions.len() == other.directions.len()
            && self
                .directions
                .iter()
                .zip(&other.directions)
                .all(|(a, b)| a.theta.to_bits() == b.theta.to_bits() && a.phi.to_bits() == b.phi.to_bits())
    }
}

fn ring_counts(thetas: &[f64], pitch: f64) -> Vec<usize> {
    thetas
        .iter()
        .map(|&t| {
            if t == 0.0 {
                1
            } else {
                ((2.0 * PI * t.sin() / pitch).round() as usize).max(1)
            }
        })
        .collect()
}

/// Build a quasi-uniform grid of about `count` directions with `θ ≤ theta_max`.
pub fn make_spherical_grid(count: usize, theta_max: f64) -> Result<SphericalGrid> {
    if count == 0 {
        return Err(Error::domain("grid count must be at least 1"));
    }
    if !(theta_max > 0.0 && theta_max <= PI) {
        return Err(Error::domain(format!(
            "theta_max must be in (0, π], got {theta_max}"
        )));
    }
    if count == 1 {
        return SphericalGrid::from_directions(vec![Direction::new(0.0, 0.0)], theta_max);
    }

    let solid_angle = 2.0 * PI * (1.0 - theta_max.cos());
    let pitch0 = (solid_angle / count as f64).sqrt();
    let n_rings = ((theta_max / pitch0 + 0.5).round() as usize).max(2);
    let dtheta = theta_max / (n_rings as f64 - 0.5);
    let thetas: Vec<f64> = (0..n_rings).map(|i| i as f64 * dtheta).collect();

    let total = |pitch: f64| ring_counts(&thetas, pitch).iter().sum::<usize>();
    let target = count as i64;
    let (mut lo, mut hi) = (pitch0 / 8.0, pitch0 * 8.0);
    let mut best = (i64::MAX, pitch0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let t = total(mid) as i64;
        let err = (t - target).abs();
        if err < best.0 || (err == best.0 && mid > best.1) {
            best = (err, mid);
        }
        if t == target {
            break;
        }
        // total decreases as the pitch grows
        if t > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let counts = ring_counts(&thetas, best.1);

    let mut directions = Vec::with_capacity(counts.iter().sum());
    for (&theta, &m) in thetas.iter().zip(&counts) {
        let step = 2.0 * PI / m as f64;
        directions.extend((0..m).map(|j| Direction::new(theta, j as f64 * step)));
    }
    SphericalGrid::from_directions(directions, theta_max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_direction_grid_is_the_pole() {
        let g = make_spherical_grid(1, 1.0).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.directions()[0].theta, 0.0);
    }

    #[test]
    fn zero_count_is_a_domain_error() {
        assert!(matches!(make_spherical_grid(0, 1.0), Err(Error::Domain(_))));
        assert!(make_spherical_grid(10, 0.0).is_err());
        assert!(make_spherical_grid(10, 4.0).is_err());
    }

    #[test]
    fn default_grid_size_and_cone() {
        let g = make_spherical_grid(4000, DEFAULT_THETA_MAX).unwrap();
        assert!((3920..=4080).contains(&g.len()), "K = {}", g.len());
        assert!(g.directions().iter().all(|d| d.theta <= DEFAULT_THETA_MAX));
        assert_eq!(g.rings()[0].count, 1);
    }

    #[test]
    fn deterministic() {
        let a = make_spherical_grid(1234, 1.1).unwrap();
        let b = make_spherical_grid(1234, 1.1).unwrap();
        assert!(a.same_directions(&b));
    }

    #[test]
    fn counts_track_request_over_a_range() {
        for &(k, tmax) in &[(50usize, PI), (300, 0.5), (2000, PI / 2.0), (4000, PI), (10000, PI / 3.0)] {
            let g = make_spherical_grid(k, tmax).unwrap();
            let rel = (g.len() as f64 - k as f64).abs() / k as f64;
            assert!(rel <= 0.02, "k={k} tmax={tmax} got {}", g.len());
        }
    }

    #[test]
    fn rings_partition_the_directions() {
        let g = make_spherical_grid(500, 1.0).unwrap();
        let mut next = 0;
        for r in g.rings() {
            assert_eq!(r.start, next);
            for i in r.indices() {
                assert_eq!(g.directions()[i].theta, r.theta);
            }
            next += r.count;
        }
        assert_eq!(next, g.len());
    }
}
