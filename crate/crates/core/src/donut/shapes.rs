use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{draw, FamilyWeights, ShapeRanges};
use crate::error::{invalid, Result};
use crate::geometry::{
    cone_mesh, marching_cubes, superellipsoid_mesh, supertoroid_mesh, torus_sdf, GridSpec, Point3,
    ScalarField, TriangleMesh, Vector3,
};

/// Shape family of one component together with its drawn parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ShapeFamily {
    Superellipsoid {
        scales: [f64; 3],
        exponents: [f64; 2],
    },
    Cone {
        radius: f64,
        height: f64,
    },
    Supertoroid {
        scales: [f64; 3],
        ring_radius: f64,
        exponents: [f64; 2],
    },
    /// Unit-ring tori centred in the z = 0 plane, welded by softmin.
    SdfTorus {
        tube_radius: f64,
        centers: Vec<[f64; 2]>,
    },
}

impl ShapeFamily {
    pub fn genus(&self) -> usize {
        match self {
            Self::Superellipsoid { .. } | Self::Cone { .. } => 0,
            Self::Supertoroid { .. } => 1,
            Self::SdfTorus { centers, .. } => centers.len(),
        }
    }

    pub fn mesh(&self, ranges: &ShapeRanges) -> Result<TriangleMesh> {
        match self {
            Self::Superellipsoid { scales, exponents } => {
                superellipsoid_mesh(*scales, *exponents, ranges.parametric_resolution)
            }
            Self::Cone { radius, height } => cone_mesh(*radius, *height, ranges.cone_segments),
            Self::Supertoroid {
                scales,
                ring_radius,
                exponents,
            } => supertoroid_mesh(
                *scales,
                *ring_radius,
                *exponents,
                ranges.parametric_resolution,
            ),
            Self::SdfTorus {
                tube_radius,
                centers,
            } => ktorus_mesh(centers, *tube_radius, ranges),
        }
    }
}

/// Draws the family and parameters of a component of the given genus.
pub fn build_component<R: Rng + ?Sized>(
    genus: usize,
    families: &FamilyWeights,
    ranges: &ShapeRanges,
    rng: &mut R,
) -> ShapeFamily {
    let scales = |rng: &mut R| {
        [
            draw(rng, ranges.axis_scale),
            draw(rng, ranges.axis_scale),
            draw(rng, ranges.axis_scale),
        ]
    };
    let exponents = |rng: &mut R| [draw(rng, ranges.exponent), draw(rng, ranges.exponent)];
    match genus {
        0 => {
            let p = families.superellipsoid / (families.superellipsoid + families.cone);
            if rng.random_bool(p) {
                ShapeFamily::Superellipsoid {
                    scales: scales(rng),
                    exponents: exponents(rng),
                }
            } else {
                ShapeFamily::Cone {
                    radius: draw(rng, ranges.cone_radius),
                    height: draw(rng, ranges.cone_height),
                }
            }
        }
        1 if rng
            .random_bool(families.supertoroid / (families.supertoroid + families.sdf_torus)) =>
        {
            ShapeFamily::Supertoroid {
                scales: scales(rng),
                ring_radius: draw(rng, ranges.ring_radius),
                exponents: exponents(rng),
            }
        }
        k => {
            let tube_radius = draw(rng, ranges.tube_radius);
            let step = 2.0 - tube_radius;
            let turn = ranges.chain_turn_degrees.to_radians();
            let mut heading: f64 = 0.0;
            let mut at = [0.0, 0.0];
            let mut centers = vec![at];
            for _ in 1..k {
                if turn > 0.0 {
                    heading += rng.random_range(-turn..=turn);
                }
                at = [at[0] + step * heading.cos(), at[1] + step * heading.sin()];
                centers.push(at);
            }
            ShapeFamily::SdfTorus {
                tube_radius,
                centers,
            }
        }
    }
}

/// Softmin union of unit-ring tori extracted with marching cubes. Cells are
/// cubic, `grid_resolution` along the longest axis, refined until the tube
/// spans `min_cells_per_tube` cells.
pub fn ktorus_mesh(
    centers: &[[f64; 2]],
    tube_radius: f64,
    ranges: &ShapeRanges,
) -> Result<TriangleMesh> {
    if centers.is_empty() {
        return Err(invalid("a k-torus needs at least one ring"));
    }
    let fields = centers
        .iter()
        .map(|c| torus_sdf(Point3::new(c[0], c[1], 0.0), Vector3::z(), 1.0, tube_radius))
        .collect::<Result<Vec<_>>>()?;
    let field = ScalarField::softmin(fields, ranges.softmin_sharpness)?;
    let bounds = field.bounds().padded(ranges.grid_padding);
    let extent = bounds.extent();
    let cell =
        (extent.max() / ranges.grid_resolution as f64).min(tube_radius / ranges.min_cells_per_tube);
    let resolution = [0, 1, 2].map(|i| ((extent[i] / cell).ceil() as usize).max(16));
    marching_cubes(&field, &GridSpec::new(resolution, bounds), 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::MeshTopology;

    #[test]
    fn ktorus_genus_matches_ring_count() {
        let ranges = ShapeRanges::default();
        for k in 1..=3 {
            let centers: Vec<[f64; 2]> = (0..k).map(|i| [1.75 * i as f64, 0.0]).collect();
            let mesh = ktorus_mesh(&centers, 0.25, &ranges).unwrap();
            let t = MeshTopology::of(&mesh);
            assert_eq!(t.genus(), Some(k as u32), "{t:?}");
        }
    }
}
