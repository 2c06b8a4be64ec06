//! Isosurface extraction on a regular grid.
//!
//! Each grid cube is split into six tetrahedra sharing the cube's main
//! diagonal (the Kuhn triangulation). The split is identical in every cube, so
//! the faces of neighbouring cubes are cut the same way and the extracted
//! surface is a closed 2-manifold whenever the level set stays inside the grid.
//! Surface vertices live on grid edges and are shared through an edge-keyed
//! map, so no positional welding is needed.

use std::collections::HashMap;

use super::{Aabb, Point3, ScalarField, TriangleMesh, Vector3};
use crate::error::{invalid, Error, Result};

/// Cell counts per axis and the box they cover.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub resolution: [usize; 3],
    pub bounds: Aabb,
}

impl GridSpec {
    pub fn new(resolution: [usize; 3], bounds: Aabb) -> Self {
        Self { resolution, bounds }
    }

    /// `resolution` cells per axis over the field bounds grown by `padding`.
    pub fn around(field: &ScalarField, resolution: usize, padding: f64) -> Self {
        Self::new([resolution; 3], field.bounds().padded(padding))
    }
}

// Corner offsets indexed by bit pattern (x = 1, y = 2, z = 4).
const KUHN_TETS: [[usize; 4]; 6] = [
    [0, 1, 3, 7],
    [0, 1, 5, 7],
    [0, 2, 3, 7],
    [0, 2, 6, 7],
    [0, 4, 5, 7],
    [0, 4, 6, 7],
];

/// Extracts the `isolevel` set of `field` as a triangle mesh oriented with
/// normals pointing toward larger field values.
pub fn marching_cubes(field: &ScalarField, grid: &GridSpec, isolevel: f64) -> Result<TriangleMesh> {
    let [nx, ny, nz] = grid.resolution;
    if grid.resolution.iter().any(|&n| n < 16) {
        return Err(invalid(format!(
            "grid resolution must be at least 16 per axis, got {:?}",
            grid.resolution
        )));
    }
    let extent = grid.bounds.extent();
    if !(extent.x > 0.0 && extent.y > 0.0 && extent.z > 0.0) {
        return Err(invalid("grid bounds must have positive extent"));
    }
    let step = Vector3::new(
        extent.x / nx as f64,
        extent.y / ny as f64,
        extent.z / nz as f64,
    );
    let (sx, sy) = (nx + 1, ny + 1);
    let corner_count = sx * sy * (nz + 1);
    if corner_count > u32::MAX as usize {
        return Err(invalid("grid too large"));
    }
    let index = |i: usize, j: usize, k: usize| i + sx * (j + sy * k);
    let position = |i: usize, j: usize, k: usize| {
        grid.bounds.min + Vector3::new(i as f64 * step.x, j as f64 * step.y, k as f64 * step.z)
    };

    let mut values = vec![0.0f64; corner_count];
    for k in 0..=nz {
        for j in 0..=ny {
            for i in 0..=nx {
                values[index(i, j, k)] = field.value(&position(i, j, k));
            }
        }
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(invalid(format!("field produced a non-finite value {v}")));
    }
    // A corner exactly on the level counts as outside; this keeps every
    // crossing strictly inside its edge's sign change.
    let inside = |v: f64| v < isolevel;

    for k in 0..=nz {
        for j in 0..=ny {
            for i in 0..=nx {
                let on_face = i == 0 || j == 0 || k == 0 || i == nx || j == ny || k == nz;
                if on_face && inside(values[index(i, j, k)]) {
                    return Err(Error::OpenSurface(format!(
                        "level set reaches the grid boundary at corner ({i}, {j}, {k})"
                    )));
                }
            }
        }
    }

    let mut vertices: Vec<Point3> = Vec::new();
    let mut triangles: Vec<[u32; 3]> = Vec::new();
    let mut edge_vertex: HashMap<u64, u32> = HashMap::new();
    let corner_pos = |id: usize| {
        let i = id % sx;
        let j = (id / sx) % sy;
        let k = id / (sx * sy);
        position(i, j, k)
    };

    let mut crossing = |a: usize, b: usize, vertices: &mut Vec<Point3>| -> u32 {
        // `a` is inside, `b` outside.
        let key = (a.min(b) as u64) << 32 | a.max(b) as u64;
        *edge_vertex.entry(key).or_insert_with(|| {
            let (va, vb) = (values[a], values[b]);
            let t = (isolevel - va) / (vb - va);
            let (pa, pb) = (corner_pos(a), corner_pos(b));
            vertices.push(pa + (pb - pa) * t);
            (vertices.len() - 1) as u32
        })
    };

    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                let mut ids = [0usize; 8];
                for (bit, id) in ids.iter_mut().enumerate() {
                    *id = index(i + (bit & 1), j + ((bit >> 1) & 1), k + ((bit >> 2) & 1));
                }
                let count = ids.iter().filter(|&&id| inside(values[id])).count();
                if count == 0 || count == 8 {
                    continue;
                }
                for tet in &KUHN_TETS {
                    let corners = tet.map(|c| ids[c]);
                    let (ins, outs): (Vec<usize>, Vec<usize>) =
                        corners.iter().partition(|&&id| inside(values[id]));
                    let tris: Vec<[u32; 3]> = match ins.len() {
                        1 => vec![[
                            crossing(ins[0], outs[0], &mut vertices),
                            crossing(ins[0], outs[1], &mut vertices),
                            crossing(ins[0], outs[2], &mut vertices),
                        ]],
                        3 => vec![[
                            crossing(ins[0], outs[0], &mut vertices),
                            crossing(ins[1], outs[0], &mut vertices),
                            crossing(ins[2], outs[0], &mut vertices),
                        ]],
                        2 => {
                            // Quad a-b-c-d around the tetrahedron's middle.
                            let a = crossing(ins[0], outs[0], &mut vertices);
                            let b = crossing(ins[0], outs[1], &mut vertices);
                            let c = crossing(ins[1], outs[1], &mut vertices);
                            let d = crossing(ins[1], outs[0], &mut vertices);
                            vec![[a, b, c], [a, c, d]]
                        }
                        _ => continue,
                    };
                    let in_c = centroid(ins.iter().map(|&id| corner_pos(id)));
                    let out_c = centroid(outs.iter().map(|&id| corner_pos(id)));
                    let outward = out_c - in_c;
                    for mut t in tris {
                        let [p, q, r] = t.map(|v| vertices[v as usize]);
                        if (q - p).cross(&(r - p)).dot(&outward) < 0.0 {
                            t.swap(1, 2);
                        }
                        triangles.push(t);
                    }
                }
            }
        }
    }

    if triangles.is_empty() {
        return Err(Error::EmptyMesh);
    }
    TriangleMesh::new(vertices, triangles)
}

fn centroid(points: impl Iterator<Item = Point3>) -> Point3 {
    let (sum, n) = points.fold((Vector3::zeros(), 0usize), |(s, n), p| {
        (s + p.coords, n + 1)
    });
    Point3::from(sum / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{sphere_sdf, torus_sdf, MeshTopology};

    #[test]
    fn sphere_extracts_as_sphere() {
        let f = sphere_sdf(Point3::origin(), 0.5).unwrap();
        let grid = GridSpec::new([64; 3], Aabb::cube(Point3::origin(), 1.0));
        let m = marching_cubes(&f, &grid, 0.0).unwrap();
        let t = MeshTopology::of(&m);
        assert_eq!((t.euler, t.components), (2, 1));
        assert!(t.manifold);
        assert!(m.signed_volume() > 0.0);
        let vol = 4.0 / 3.0 * std::f64::consts::PI * 0.125;
        assert!((m.signed_volume() - vol).abs() / vol < 0.02);
    }

    #[test]
    fn torus_extracts_with_genus_one() {
        let f = torus_sdf(
            Point3::new(0.1, -0.05, 0.02),
            Vector3::new(1.0, 2.0, 0.5),
            1.0,
            0.3,
        )
        .unwrap();
        let grid = GridSpec::around(&f, 48, 0.1);
        let m = marching_cubes(&f, &grid, 0.0).unwrap();
        let t = MeshTopology::of(&m);
        assert_eq!(t.genus(), Some(1));
    }

    #[test]
    fn boundary_contact_is_an_open_surface() {
        let f = sphere_sdf(Point3::origin(), 1.2).unwrap();
        let grid = GridSpec::new([16; 3], Aabb::cube(Point3::origin(), 1.0));
        assert!(matches!(
            marching_cubes(&f, &grid, 0.0),
            Err(Error::OpenSurface(_))
        ));
    }

    #[test]
    fn isolevel_outside_range() {
        let f = sphere_sdf(Point3::origin(), 0.5).unwrap();
        let grid = GridSpec::new([16; 3], Aabb::cube(Point3::origin(), 1.0));
        // Below every value: nothing inside.
        assert!(matches!(
            marching_cubes(&f, &grid, -10.0),
            Err(Error::EmptyMesh)
        ));
        // Above every value: everything inside, including the boundary.
        assert!(matches!(
            marching_cubes(&f, &grid, 10.0),
            Err(Error::OpenSurface(_))
        ));
    }

    #[test]
    fn coarse_grid_rejected() {
        let f = sphere_sdf(Point3::origin(), 0.5).unwrap();
        let grid = GridSpec::new([8; 3], Aabb::cube(Point3::origin(), 1.0));
        assert!(marching_cubes(&f, &grid, 0.0).is_err());
    }
}
