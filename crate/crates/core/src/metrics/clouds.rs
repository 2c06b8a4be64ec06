use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::geometry::{Point3, PointCloud};

/// Distance from each point of `from` to its nearest neighbour in `to`.
fn nearest(from: &[Point3], to: &[Point3]) -> Vec<f64> {
    from.par_iter()
        .map(|p| {
            to.iter()
                .map(|q| (p - q).norm_squared())
                .fold(f64::INFINITY, f64::min)
                .sqrt()
        })
        .collect()
}

fn check(x: &PointCloud, y: &PointCloud) -> Result<()> {
    if x.is_empty() || y.is_empty() {
        return Err(invalid(
            "distance between point clouds needs non-empty clouds",
        ));
    }
    Ok(())
}

/// Symmetric Hausdorff distance.
pub fn hausdorff(x: &PointCloud, y: &PointCloud) -> Result<f64> {
    check(x, y)?;
    let directed = |a: &PointCloud, b: &PointCloud| {
        nearest(&a.points, &b.points)
            .into_iter()
            .fold(0.0, f64::max)
    };
    Ok(directed(x, y).max(directed(y, x)))
}

/// Chamfer distance: the average of the two directed mean nearest-neighbour distances.
pub fn chamfer(x: &PointCloud, y: &PointCloud) -> Result<f64> {
    check(x, y)?;
    let mean = |v: Vec<f64>| v.iter().sum::<f64>() / v.len() as f64;
    Ok(0.5 * (mean(nearest(&x.points, &y.points)) + mean(nearest(&y.points, &x.points))))
}
