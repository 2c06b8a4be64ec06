use rand::distr::{weighted::WeightedIndex, Distribution};
use rand::Rng;

use super::{Point3, TriangleMesh, Vector3};
use crate::error::{invalid, Result};
use crate::rng;

/// Ordered list of 3D points.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PointCloud {
    pub points: Vec<Point3>,
}

impl PointCloud {
    pub fn new(points: Vec<Point3>) -> Self {
        Self { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

impl From<Vec<Point3>> for PointCloud {
    fn from(points: Vec<Point3>) -> Self {
        Self { points }
    }
}

/// Area-weighted uniform sampling of the mesh surface; pure in `(mesh, n_points, seed)`.
pub fn sample_surface(mesh: &TriangleMesh, n_points: usize, seed: u64) -> Result<PointCloud> {
    if n_points == 0 {
        return Err(invalid("cannot sample zero points"));
    }
    let areas: Vec<f64> = mesh
        .triangles
        .iter()
        .map(|t| mesh.triangle_area(t))
        .collect();
    let total: f64 = areas.iter().sum();
    if !(total > 0.0 && total.is_finite()) {
        return Err(invalid("mesh has no surface area to sample"));
    }
    let pick = WeightedIndex::new(&areas).map_err(|e| invalid(e.to_string()))?;
    let mut rng = rng::stream(seed, "surface-sample");
    let points = (0..n_points)
        .map(|_| {
            let [a, b, c] = mesh.corners(&mesh.triangles[pick.sample(&mut rng)]);
            let (r1, r2): (f64, f64) = (rng.random(), rng.random());
            let s = r1.sqrt();
            Point3::from(a.coords * (1.0 - s) + b.coords * (s * (1.0 - r2)) + c.coords * (s * r2))
        })
        .collect();
    Ok(PointCloud { points })
}

/// Centres the cloud at its centroid and scales the farthest point to norm 1.
pub fn normalize_unit_sphere(cloud: &PointCloud) -> Result<PointCloud> {
    if cloud.is_empty() {
        return Err(invalid("cannot normalize an empty cloud"));
    }
    let centroid: Vector3 =
        cloud.points.iter().map(|p| p.coords).sum::<Vector3>() / cloud.len() as f64;
    let centred: Vec<Vector3> = cloud.points.iter().map(|p| p.coords - centroid).collect();
    let radius = centred.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let scale = if radius > 0.0 { 1.0 / radius } else { 0.0 };
    Ok(PointCloud {
        points: centred
            .into_iter()
            .map(|v| Point3::from(v * scale))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::superellipsoid_mesh;
    use statrs::distribution::{ChiSquared, ContinuousCDF};

    #[test]
    fn sampling_is_deterministic() {
        let m = superellipsoid_mesh([1.0, 0.5, 0.8], [1.0, 1.0], [16, 16]).unwrap();
        let a = sample_surface(&m, 1024, 11).unwrap();
        let b = sample_surface(&m, 1024, 11).unwrap();
        let c = sample_surface(&m, 1024, 12).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn single_triangle_sample_is_inside() {
        let m = TriangleMesh::new(
            vec![
                Point3::new(0.0, 0.0, 0.0),
                Point3::new(1.0, 0.0, 0.0),
                Point3::new(0.0, 1.0, 0.0),
            ],
            vec![[0, 1, 2]],
        )
        .unwrap();
        let p = sample_surface(&m, 1, 5).unwrap().points[0];
        assert!(p.x >= 0.0 && p.y >= 0.0 && p.x + p.y <= 1.0 + 1e-12 && p.z == 0.0);
    }

    #[test]
    fn counts_follow_triangle_areas() {
        // Three triangles with areas in ratio 1 : 2 : 5.
        let tri = |x: f64, w: f64| {
            [
                Point3::new(x, 0.0, 0.0),
                Point3::new(x + w, 0.0, 0.0),
                Point3::new(x, 1.0, 0.0),
            ]
        };
        let mut verts = Vec::new();
        for (x, w) in [(0.0, 1.0), (3.0, 2.0), (8.0, 5.0)] {
            verts.extend(tri(x, w));
        }
        let m = TriangleMesh::new(verts, vec![[0, 1, 2], [3, 4, 5], [6, 7, 8]]).unwrap();
        let n = 100_000;
        let cloud = sample_surface(&m, n, 99).unwrap();
        let mut counts = [0f64; 3];
        for p in &cloud.points {
            let slot = if p.x < 2.0 {
                0
            } else if p.x < 6.0 {
                1
            } else {
                2
            };
            counts[slot] += 1.0;
        }
        let expected = [1.0, 2.0, 5.0].map(|w| w / 8.0 * n as f64);
        let chi2: f64 = counts
            .iter()
            .zip(&expected)
            .map(|(o, e)| (o - e).powi(2) / e)
            .sum();
        let p = 1.0 - ChiSquared::new(2.0).unwrap().cdf(chi2);
        assert!(p > 0.001, "chi2 = {chi2}, p = {p}");
    }

    #[test]
    fn zero_area_mesh_rejected() {
        let m = TriangleMesh::new(vec![Point3::origin(); 3], vec![[0, 1, 2]]).unwrap();
        assert!(sample_surface(&m, 4, 0).is_err());
    }

    #[test]
    fn normalization_landmarks() {
        let c = PointCloud::new(vec![Point3::new(0.0, 0.0, 0.0), Point3::new(0.0, 0.0, 2.0)]);
        let n = normalize_unit_sphere(&c).unwrap();
        assert_eq!(
            n.points,
            vec![Point3::new(0.0, 0.0, -1.0), Point3::new(0.0, 0.0, 1.0)]
        );

        let single = PointCloud::new(vec![Point3::new(3.0, 3.0, 3.0); 4]);
        assert!(normalize_unit_sphere(&single)
            .unwrap()
            .points
            .iter()
            .all(|p| p.coords.norm() == 0.0));
        assert!(normalize_unit_sphere(&PointCloud::default()).is_err());
    }

    #[test]
    fn normalization_is_similarity_invariant_and_idempotent() {
        let m = superellipsoid_mesh([1.0, 0.5, 0.8], [0.7, 1.2], [16, 16]).unwrap();
        let c = sample_surface(&m, 300, 1).unwrap();
        let n1 = normalize_unit_sphere(&c).unwrap();
        let moved = PointCloud::new(
            c.points
                .iter()
                .map(|p| Point3::from(p.coords * 7.0 + Vector3::new(1.0, -4.0, 2.5)))
                .collect(),
        );
        let n2 = normalize_unit_sphere(&moved).unwrap();
        let again = normalize_unit_sphere(&n1).unwrap();
        for ((a, b), c) in n1.points.iter().zip(&n2.points).zip(&again.points) {
            assert!((a - b).norm() < 1e-12);
            assert!((a - c).norm() < 1e-12);
        }
    }
}
