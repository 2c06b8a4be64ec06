//! Parametric superquadrics and cones.

use std::f64::consts::PI;

use super::{Point3, TriangleMesh};
use crate::error::{invalid, Result};

/// `sign(cos u) |cos u|^ε`
fn pow_cos(u: f64, eps: f64) -> f64 {
    let c = u.cos();
    c.signum() * c.abs().powf(eps)
}

/// `sign(sin u) |sin u|^ε`
fn pow_sin(u: f64, eps: f64) -> f64 {
    let s = u.sin();
    s.signum() * s.abs().powf(eps)
}

fn check_shape(scales: [f64; 3], exponents: [f64; 2], resolution: [usize; 2]) -> Result<()> {
    if scales.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
        return Err(invalid(format!("scales must be positive, got {scales:?}")));
    }
    if exponents.iter().any(|e| !(0.2..=2.0).contains(e)) {
        return Err(invalid(format!(
            "exponents must lie in [0.2, 2.0], got {exponents:?}"
        )));
    }
    if resolution.iter().any(|&n| n < 8) {
        return Err(invalid(format!(
            "resolution must be at least 8 per direction, got {resolution:?}"
        )));
    }
    Ok(())
}

/// Superellipsoid with one apex vertex per pole.
///
/// `n_u` samples around the longitude and `n_v` latitude bands, giving
/// `n_u (n_v - 1) + 2` vertices and `2 n_u (n_v - 1)` triangles.
pub fn superellipsoid_mesh(
    scales: [f64; 3],
    exponents: [f64; 2],
    resolution: [usize; 2],
) -> Result<TriangleMesh> {
    check_shape(scales, exponents, resolution)?;
    let [sx, sy, sz] = scales;
    let [e1, e2] = exponents;
    let [nu, nv] = resolution;

    let rings = nv - 1;
    let mut vertices = Vec::with_capacity(nu * rings + 2);
    for k in 1..nv {
        let v = -PI / 2.0 + PI * k as f64 / nv as f64;
        for i in 0..nu {
            let u = -PI + 2.0 * PI * i as f64 / nu as f64;
            vertices.push(Point3::new(
                sx * pow_cos(v, e1) * pow_cos(u, e2),
                sy * pow_cos(v, e1) * pow_sin(u, e2),
                sz * pow_sin(v, e1),
            ));
        }
    }
    let south = vertices.len() as u32;
    vertices.push(Point3::new(0.0, 0.0, -sz));
    let north = south + 1;
    vertices.push(Point3::new(0.0, 0.0, sz));

    let at = |k: usize, i: usize| (k * nu + i % nu) as u32;
    let mut triangles = Vec::with_capacity(2 * nu * rings);
    for k in 0..rings - 1 {
        for i in 0..nu {
            let (a, b) = (at(k, i), at(k, i + 1));
            let (c, d) = (at(k + 1, i + 1), at(k + 1, i));
            triangles.push([a, b, c]);
            triangles.push([a, c, d]);
        }
    }
    for i in 0..nu {
        triangles.push([south, at(0, i + 1), at(0, i)]);
        triangles.push([north, at(rings - 1, i), at(rings - 1, i + 1)]);
    }
    TriangleMesh::new(vertices, triangles)
}

/// Supertoroid on a periodic `n_u × n_v` grid (`n_u n_v` vertices, χ = 0).
///
/// The tube has unit radius before scaling, so `ring_radius` must exceed 1.
pub fn supertoroid_mesh(
    scales: [f64; 3],
    ring_radius: f64,
    exponents: [f64; 2],
    resolution: [usize; 2],
) -> Result<TriangleMesh> {
    check_shape(scales, exponents, resolution)?;
    if !(ring_radius > 1.0 && ring_radius.is_finite()) {
        return Err(invalid(format!(
            "ring radius must exceed the unit tube radius, got {ring_radius}"
        )));
    }
    let [sx, sy, sz] = scales;
    let [e1, e2] = exponents;
    let [nu, nv] = resolution;

    let mut vertices = Vec::with_capacity(nu * nv);
    for i in 0..nu {
        let u = -PI + 2.0 * PI * i as f64 / nu as f64;
        for k in 0..nv {
            let v = -PI + 2.0 * PI * k as f64 / nv as f64;
            let radial = ring_radius + pow_cos(v, e1);
            vertices.push(Point3::new(
                sx * radial * pow_cos(u, e2),
                sy * radial * pow_sin(u, e2),
                sz * pow_sin(v, e1),
            ));
        }
    }
    let at = |i: usize, k: usize| ((i % nu) * nv + k % nv) as u32;
    let mut triangles = Vec::with_capacity(2 * nu * nv);
    for i in 0..nu {
        for k in 0..nv {
            let (a, b) = (at(i, k), at(i + 1, k));
            let (c, d) = (at(i + 1, k + 1), at(i, k + 1));
            triangles.push([a, b, c]);
            triangles.push([a, c, d]);
        }
    }
    TriangleMesh::new(vertices, triangles)
}

/// Closed cone: apex, capped base, `segments` side triangles. Centred on its
/// axial mid-height.
pub fn cone_mesh(radius: f64, height: f64, segments: usize) -> Result<TriangleMesh> {
    if !(radius > 0.0 && height > 0.0 && radius.is_finite() && height.is_finite()) {
        return Err(invalid(format!(
            "cone needs positive radius and height, got r={radius} h={height}"
        )));
    }
    if segments < 3 {
        return Err(invalid(format!(
            "cone needs at least 3 segments, got {segments}"
        )));
    }
    let half = height / 2.0;
    let mut vertices: Vec<Point3> = (0..segments)
        .map(|i| {
            let theta = 2.0 * PI * i as f64 / segments as f64;
            Point3::new(radius * theta.cos(), radius * theta.sin(), -half)
        })
        .collect();
    let apex = segments as u32;
    vertices.push(Point3::new(0.0, 0.0, half));
    let base = apex + 1;
    vertices.push(Point3::new(0.0, 0.0, -half));

    let mut triangles = Vec::with_capacity(2 * segments);
    for i in 0..segments {
        let a = i as u32;
        let b = ((i + 1) % segments) as u32;
        triangles.push([a, b, apex]);
        triangles.push([base, b, a]);
    }
    TriangleMesh::new(vertices, triangles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::MeshTopology;

    #[test]
    fn unit_sphere_case() {
        let m = superellipsoid_mesh([1.0; 3], [1.0, 1.0], [32, 32]).unwrap();
        let t = MeshTopology::of(&m);
        assert_eq!((t.euler, t.components, t.genus()), (2, 1, Some(0)));
        assert!(m.signed_volume() > 0.0);
        for p in &m.vertices {
            assert!((p.coords.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn anisotropic_superellipsoid_stays_a_sphere() {
        let m = superellipsoid_mesh([2.0, 1.0, 0.5], [0.5, 1.5], [24, 16]).unwrap();
        let t = MeshTopology::of(&m);
        assert_eq!(t.euler, 2);
        assert!(t.manifold);
        assert!(m.signed_volume() > 0.0);
    }

    #[test]
    fn welded_vertex_count_matches_duplicate_detection() {
        // Oracle: sample the closed parameter rectangle naively (seam column and
        // pole rows included), then count distinct positions.
        let (nu, nv) = (8usize, 8usize);
        let mut distinct: Vec<Point3> = Vec::new();
        for k in 0..=nv {
            let v = -PI / 2.0 + PI * k as f64 / nv as f64;
            for i in 0..=nu {
                let u = -PI + 2.0 * PI * i as f64 / nu as f64;
                let p = Point3::new(
                    pow_cos(v, 1.0) * pow_cos(u, 1.0),
                    pow_cos(v, 1.0) * pow_sin(u, 1.0),
                    pow_sin(v, 1.0),
                );
                if !distinct.iter().any(|q| (q - p).norm() < 1e-9) {
                    distinct.push(p);
                }
            }
        }
        assert_eq!(distinct.len(), 58);
        let m = superellipsoid_mesh([1.0; 3], [1.0, 1.0], [nu, nv]).unwrap();
        assert_eq!(m.vertex_count(), distinct.len());
    }

    #[test]
    fn standard_torus_counts() {
        let m = supertoroid_mesh([1.0; 3], 2.0, [1.0, 1.0], [16, 16]).unwrap();
        let t = MeshTopology::of(&m);
        assert_eq!((t.vertices, t.edges, t.faces, t.euler), (256, 768, 512, 0));
        assert!(t.manifold);
        assert_eq!(t.genus(), Some(1));
        assert!(m.signed_volume() > 0.0);
    }

    #[test]
    fn supertoroid_rejects_thin_ring() {
        assert!(supertoroid_mesh([1.0; 3], 1.0, [1.0, 1.0], [16, 16]).is_err());
        assert!(supertoroid_mesh([1.0; 3], 0.5, [1.0, 1.0], [16, 16]).is_err());
    }

    #[test]
    fn cone_counts_follow_construction() {
        for s in [3usize, 4, 7, 32] {
            let m = cone_mesh(1.0, 1.0, s).unwrap();
            let t = MeshTopology::of(&m);
            assert_eq!((t.vertices, t.edges, t.faces), (s + 2, 3 * s, 2 * s));
            assert_eq!(t.euler, 2);
            assert!(t.manifold);
            assert!(m.signed_volume() > 0.0);
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(cone_mesh(1.0, 0.0, 8).is_err());
        assert!(cone_mesh(1.0, 1.0, 2).is_err());
        assert!(superellipsoid_mesh([0.0, 1.0, 1.0], [1.0, 1.0], [8, 8]).is_err());
        assert!(superellipsoid_mesh([1.0; 3], [1.0, 1.0], [4, 8]).is_err());
        assert!(superellipsoid_mesh([1.0; 3], [0.1, 1.0], [8, 8]).is_err());
    }
}
