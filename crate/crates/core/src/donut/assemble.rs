use rand::Rng;
use serde::{Deserialize, Serialize};

use super::shapes::{build_component, ShapeFamily};
use super::verify::{verify_labels, LabelReport};
use super::{draw, labels::pick_decomposition, GenerationConfig, GenusDecomposition, LabelPair};
use crate::error::{invalid, Error, Result};
use crate::geometry::{
    apply_rigid_twist, normalize_unit_sphere, sample_surface, PointCloud, RigidTwist, TriangleMesh,
    Vector3,
};
use crate::rng;

/// How one component was built and placed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentRecord {
    pub genus: usize,
    pub shape: ShapeFamily,
    /// Vertex centroid of the raw shape, moved to the origin before scaling.
    pub centroid: [f64; 3],
    pub scale: f64,
    /// Bounding radius about the placement centre.
    pub radius: f64,
    pub transform: RigidTwist,
}

/// Relative paths of the files written for a sample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleFiles {
    pub mesh: String,
    pub cloud: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleManifest {
    pub id: usize,
    pub label: LabelPair,
    pub decomposition: GenusDecomposition,
    /// Seed of the accepted attempt; `assemble_sample` with it reproduces the meshes.
    pub seed: u64,
    /// Rejected draws before this one.
    pub rejected: usize,
    pub components: Vec<ComponentRecord>,
    pub files: Option<SampleFiles>,
    pub report: LabelReport,
}

#[derive(Debug, Clone)]
pub struct GeneratedSample {
    pub meshes: Vec<TriangleMesh>,
    pub cloud: PointCloud,
    pub manifest: SampleManifest,
}

/// Builds, augments and places one mesh per component of `decomposition`.
pub fn assemble_sample(
    label: &LabelPair,
    decomposition: &GenusDecomposition,
    config: &GenerationConfig,
    seed: u64,
) -> Result<(Vec<TriangleMesh>, SampleManifest)> {
    if !decomposition.matches(label) {
        return Err(invalid(format!(
            "decomposition {:?} does not realise label {label:?}",
            decomposition.counts
        )));
    }
    let ranges = &config.shapes;
    let mut parts = Vec::with_capacity(label.beta0);
    for (i, genus) in decomposition.component_genera().into_iter().enumerate() {
        let mut shape_rng = rng::indexed_stream(seed, "component-shape", i as u64);
        let shape = build_component(genus, &config.families, ranges, &mut shape_rng);
        let raw = shape.mesh(ranges)?;
        let centroid = raw.centroid();
        let raw_radius = raw.radius_about(&centroid);
        if !(raw_radius > 0.0 && raw_radius.is_finite()) {
            return Err(Error::EmptyMesh);
        }
        let radius = draw(&mut shape_rng, ranges.component_radius);
        let scale = radius / raw_radius;
        let mesh = raw.translated(&-centroid.coords).scaled(scale);
        let mut augment_rng = rng::indexed_stream(seed, "component-augment", i as u64);
        let transform = RigidTwist::random(&mut augment_rng, ranges.max_twist_rate);
        parts.push((genus, shape, centroid, scale, radius, mesh, transform));
    }

    let radii: Vec<f64> = parts.iter().map(|p| p.4).collect();
    let centers = place(&radii, config, seed)?;

    let mut meshes = Vec::with_capacity(parts.len());
    let mut components = Vec::with_capacity(parts.len());
    for ((genus, shape, centroid, scale, radius, mesh, transform), center) in
        parts.into_iter().zip(centers)
    {
        let transform = transform.with_translation(center);
        meshes.push(apply_rigid_twist(&mesh, &transform)?);
        components.push(ComponentRecord {
            genus,
            shape,
            centroid: centroid.coords.into(),
            scale,
            radius,
            transform,
        });
    }
    let report = verify_labels(&meshes);
    let manifest = SampleManifest {
        id: 0,
        label: *label,
        decomposition: decomposition.clone(),
        seed,
        rejected: 0,
        components,
        files: None,
        report,
    };
    Ok((meshes, manifest))
}

/// Rejection sampling of centres in a cube of half-width `h β0^(1/3)` so that
/// bounding spheres keep a gap of `gap_fraction` times the cube diagonal.
fn place(radii: &[f64], config: &GenerationConfig, seed: u64) -> Result<Vec<Vector3>> {
    let half = config.placement_half_width * (radii.len() as f64).cbrt();
    let gap = config.gap_fraction * 2.0 * half * 3f64.sqrt();
    let mut rng = rng::stream(seed, "placement");
    let mut centers: Vec<Vector3> = Vec::with_capacity(radii.len());
    for &r in radii {
        let mut placed = false;
        for _ in 0..config.placement_attempts {
            let c = Vector3::from_fn(|_, _| rng.random_range(-half..=half));
            if centers
                .iter()
                .zip(radii)
                .all(|(o, &ro)| (c - o).norm() - r - ro >= gap)
            {
                centers.push(c);
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(Error::AssemblyFailed {
                attempts: config.placement_attempts,
            });
        }
    }
    Ok(centers)
}

/// Sample `id` of a dataset with the given label. Draws that fail placement or
/// verification are replaced by fresh draws with the same label.
pub fn generate_sample(
    config: &GenerationConfig,
    id: usize,
    label: &LabelPair,
) -> Result<GeneratedSample> {
    let sample_seed = rng::derive_indexed(config.seed, "sample", id as u64);
    for attempt in 0..config.sample_retries {
        let seed = rng::derive_indexed(sample_seed, "attempt", attempt as u64);
        let decomposition =
            pick_decomposition(label, config.g_max, &mut rng::stream(seed, "decomposition"))
                .ok_or_else(|| invalid(format!("label {label:?} has no decomposition")))?;
        match assemble_sample(label, &decomposition, config, seed) {
            Ok((meshes, mut manifest)) if manifest.report.matches(label) => {
                let merged = TriangleMesh::merge(&meshes);
                let cloud = sample_surface(
                    &merged,
                    config.cloud_points,
                    rng::derive_seed(seed, "cloud"),
                )?;
                manifest.id = id;
                manifest.rejected = attempt;
                return Ok(GeneratedSample {
                    meshes,
                    cloud: normalize_unit_sphere(&cloud)?,
                    manifest,
                });
            }
            Ok((_, manifest)) => {
                log::debug!("sample {id}: verification mismatch {:?}", manifest.report)
            }
            Err(e @ (Error::AssemblyFailed { .. } | Error::OpenSurface(_) | Error::EmptyMesh)) => {
                log::debug!("sample {id}: attempt {attempt} rejected: {e}")
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::AssemblyFailed {
        attempts: config.sample_retries,
    })
}
