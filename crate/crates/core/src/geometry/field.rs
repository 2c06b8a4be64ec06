//! Implicit surfaces as signed scalar fields (negative inside).

use std::fmt;
use std::sync::Arc;

use super::{Point3, Vector3};
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub min: Point3,
    pub max: Point3,
}

impl Aabb {
    pub fn new(min: Point3, max: Point3) -> Self {
        Self { min, max }
    }

    pub fn cube(center: Point3, half: f64) -> Self {
        let h = Vector3::repeat(half);
        Self::new(center - h, center + h)
    }

    pub fn union(&self, other: &Aabb) -> Aabb {
        Aabb::new(self.min.inf(&other.min), self.max.sup(&other.max))
    }

    pub fn extent(&self) -> Vector3 {
        self.max - self.min
    }

    /// Grows every side by `fraction` of the longest extent.
    pub fn padded(&self, fraction: f64) -> Aabb {
        let pad = Vector3::repeat(self.extent().max() * fraction);
        Aabb::new(self.min - pad, self.max + pad)
    }
}

type Eval = dyn Fn(&Point3) -> f64 + Send + Sync;

/// A real-valued field with the region in which its zero set is contained.
#[derive(Clone)]
pub struct ScalarField {
    eval: Arc<Eval>,
    bounds: Aabb,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField")
            .field("bounds", &self.bounds)
            .finish_non_exhaustive()
    }
}

impl ScalarField {
    pub fn new(bounds: Aabb, eval: impl Fn(&Point3) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            eval: Arc::new(eval),
            bounds,
        }
    }

    pub fn value(&self, p: &Point3) -> f64 {
        (self.eval)(p)
    }

    pub fn bounds(&self) -> Aabb {
        self.bounds
    }

    /// Smooth union of several fields via [`softmin_combine`].
    pub fn softmin(fields: Vec<ScalarField>, sharpness: f64) -> Result<ScalarField> {
        if fields.is_empty() {
            return Err(invalid("softmin of zero fields"));
        }
        check_sharpness(sharpness)?;
        let bounds = fields
            .iter()
            .skip(1)
            .fold(fields[0].bounds, |acc, f| acc.union(&f.bounds));
        Ok(ScalarField::new(bounds, move |p| {
            let mut buf = [0.0f64; 16];
            if fields.len() <= buf.len() {
                for (slot, f) in buf.iter_mut().zip(&fields) {
                    *slot = f.value(p);
                }
                softmin_unchecked(&buf[..fields.len()], sharpness)
            } else {
                let values: Vec<f64> = fields.iter().map(|f| f.value(p)).collect();
                softmin_unchecked(&values, sharpness)
            }
        }))
    }
}

fn check_sharpness(k: f64) -> Result<()> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(invalid(format!(
            "softmin sharpness must be positive, got {k}"
        )));
    }
    Ok(())
}

fn softmin_unchecked(values: &[f64], k: f64) -> f64 {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let sum: f64 = values.iter().map(|&s| (-k * (s - lo)).exp()).sum();
    lo - sum.ln() / k
}

/// `−(1/k) log Σ exp(−k sᵢ)`, evaluated with a shift by the minimum.
pub fn softmin_combine(values: &[f64], sharpness: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(invalid("softmin of an empty list"));
    }
    check_sharpness(sharpness)?;
    Ok(softmin_unchecked(values, sharpness))
}

/// Exact signed distance to a torus with the given ring and tube radii.
pub fn torus_sdf(
    center: Point3,
    axis: Vector3,
    ring_radius: f64,
    tube_radius: f64,
) -> Result<ScalarField> {
    if !(tube_radius > 0.0 && tube_radius < ring_radius && ring_radius.is_finite()) {
        return Err(invalid(format!(
            "torus needs 0 < r < R, got r={tube_radius} R={ring_radius}"
        )));
    }
    let norm = axis.norm();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(invalid("torus axis must be a non-zero vector"));
    }
    let axis = axis / norm;
    let bounds = Aabb::cube(center, ring_radius + tube_radius);
    Ok(ScalarField::new(bounds, move |p| {
        let d = p - center;
        let along = d.dot(&axis);
        let radial = (d - axis * along).norm();
        (radial - ring_radius).hypot(along) - tube_radius
    }))
}

pub fn sphere_sdf(center: Point3, radius: f64) -> Result<ScalarField> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(invalid(format!(
            "sphere radius must be positive, got {radius}"
        )));
    }
    Ok(ScalarField::new(Aabb::cube(center, radius), move |p| {
        (p - center).norm() - radius
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn torus_distance_landmarks() {
        let f = torus_sdf(Point3::origin(), Vector3::z(), 2.0, 0.5).unwrap();
        assert!((f.value(&Point3::new(2.0, 0.0, 0.0)) + 0.5).abs() < 1e-12);
        assert!((f.value(&Point3::origin()) - 1.5).abs() < 1e-12);
        assert!((f.value(&Point3::new(0.0, 3.5, 0.0)) - 1.0).abs() < 1e-12);
        assert!(torus_sdf(Point3::origin(), Vector3::z(), 1.0, 1.0).is_err());
    }

    #[test]
    fn tilted_axis_is_honoured() {
        let f = torus_sdf(Point3::new(1.0, 1.0, 1.0), Vector3::x(), 2.0, 0.5).unwrap();
        // The ring lies in the y-z plane around the centre.
        assert!((f.value(&Point3::new(1.0, 3.0, 1.0)) + 0.5).abs() < 1e-12);
        assert!((f.value(&Point3::new(3.0, 1.0, 1.0)) - (8.0f64.sqrt() - 0.5)).abs() < 1e-12);
    }

    #[test]
    fn softmin_reference_values() {
        assert_eq!(softmin_combine(&[0.3], 5.0).unwrap(), 0.3);
        let two_zeros = softmin_combine(&[0.0, 0.0], 1.0).unwrap();
        assert!((two_zeros + std::f64::consts::LN_2).abs() < 1e-15);
        assert!(softmin_combine(&[], 1.0).is_err());
        assert!(softmin_combine(&[1.0], 0.0).is_err());
    }

    #[test]
    fn softmin_survives_large_arguments() {
        let v = softmin_combine(&[1000.0, 1000.5], 50.0).unwrap();
        assert!(v.is_finite() && v <= 1000.0);
    }

    proptest! {
        #[test]
        fn softmin_bounds_the_minimum(values in prop::collection::vec(-2.0f64..2.0, 1..12), k in 0.1f64..100.0) {
            let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
            let s = softmin_combine(&values, k).unwrap();
            prop_assert!(s <= lo + 1e-12);
            prop_assert!(s >= lo - (values.len() as f64).ln() / k - 1e-12);
        }

        #[test]
        fn sharp_softmin_approaches_min(values in prop::collection::vec(-2.0f64..2.0, 1..12)) {
            let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
            let s = softmin_combine(&values, 1e3).unwrap();
            prop_assert!(lo - s < 1e-2);
        }
    }
}
