//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

pub mod matching;
pub mod naive_ph;
pub mod reference_decoder;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use topofiltr::geometry::{Point3, PointCloud};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_cloud(rng: &mut impl Rng, n: usize) -> PointCloud {
    PointCloud::new(
        (0..n)
            .map(|_| {
                Point3::new(
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                )
            })
            .collect(),
    )
}

pub fn circle(n: usize, radius: f64) -> PointCloud {
    PointCloud::new(
        (0..n)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / n as f64;
                Point3::new(radius * t.cos(), radius * t.sin(), 0.0)
            })
            .collect(),
    )
}

/// Sorted (birth, death) list, for multiset comparison.
pub fn sorted(mut v: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    v
}

pub fn multisets_close(a: &[(f64, f64)], b: &[(f64, f64)], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(x, y)| (x.0 - y.0).abs() <= tol && (x.1 - y.1).abs() <= tol)
}
