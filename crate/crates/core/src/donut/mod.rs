//! DONUT generation: balanced (β0, genus) labels, per-component genus
//! decompositions, non-overlapping assembly of augmented components, label
//! verification and dataset emission.

mod assemble;
mod dataset;
mod labels;
mod shapes;
mod verify;

pub use assemble::{
    assemble_sample, generate_sample, ComponentRecord, GeneratedSample, SampleFiles, SampleManifest,
};
pub use dataset::{
    generate_dataset, read_manifest, verify_dataset, Dataset, DatasetManifest, DatasetVerification,
    MANIFEST_FILE,
};
pub use labels::{
    enumerate_genus_decompositions, pick_decomposition, sample_labels, GenusDecomposition,
    LabelPair,
};
pub use shapes::{build_component, ktorus_mesh, ShapeFamily};
pub use verify::{verify_labels, LabelReport};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Mixture weights of the shape families per component genus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyWeights {
    pub superellipsoid: f64,
    pub cone: f64,
    pub supertoroid: f64,
    pub sdf_torus: f64,
}

impl Default for FamilyWeights {
    fn default() -> Self {
        Self {
            superellipsoid: 0.7,
            cone: 0.3,
            supertoroid: 0.5,
            sdf_torus: 0.5,
        }
    }
}

/// Sampling ranges `[lo, hi]` of the shape hyper-parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeRanges {
    pub axis_scale: [f64; 2],
    pub exponent: [f64; 2],
    pub ring_radius: [f64; 2],
    pub cone_radius: [f64; 2],
    pub cone_height: [f64; 2],
    /// Tube radius of the SDF tori, whose ring radius is 1.
    pub tube_radius: [f64; 2],
    /// Largest heading change between consecutive tori of a k-torus chain.
    pub chain_turn_degrees: f64,
    pub softmin_sharpness: f64,
    /// Cells along the longest axis of the padded bounding box.
    pub grid_resolution: usize,
    pub grid_padding: f64,
    /// Cells per tube radius are never fewer than this.
    pub min_cells_per_tube: f64,
    pub parametric_resolution: [usize; 2],
    pub cone_segments: usize,
    /// Bounding radius of a placed component.
    pub component_radius: [f64; 2],
    /// Twist in radians per unit length along the twist axis.
    pub max_twist_rate: f64,
}

impl Default for ShapeRanges {
    fn default() -> Self {
        Self {
            axis_scale: [0.6, 1.4],
            exponent: [0.4, 1.8],
            ring_radius: [1.6, 3.0],
            cone_radius: [0.5, 1.2],
            cone_height: [0.8, 2.0],
            tube_radius: [0.2, 0.35],
            chain_turn_degrees: 40.0,
            softmin_sharpness: 32.0,
            grid_resolution: 96,
            grid_padding: 0.1,
            min_cells_per_tube: 4.0,
            parametric_resolution: [48, 32],
            cone_segments: 32,
            component_radius: [0.6, 1.0],
            max_twist_rate: 0.6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationConfig {
    /// Largest genus of a single component.
    pub g_max: usize,
    /// Largest total genus of a sample.
    pub total_genus_max: usize,
    pub beta0_min: usize,
    pub beta0_max: usize,
    /// Labels drawn per β0 value.
    pub replicates: usize,
    pub families: FamilyWeights,
    pub shapes: ShapeRanges,
    /// Half-width of the placement cube for one component; scaled by β0^(1/3).
    pub placement_half_width: f64,
    /// Minimum bounding-sphere gap as a fraction of the placement cube diagonal.
    pub gap_fraction: f64,
    pub placement_attempts: usize,
    /// Fresh draws of a sample before giving up on it.
    pub sample_retries: usize,
    pub cloud_points: usize,
    pub seed: u64,
}

impl Default for GenerationConfig {
    fn default() -> Self {
        Self {
            g_max: 5,
            total_genus_max: 10,
            beta0_min: 1,
            beta0_max: 6,
            replicates: 1000,
            families: FamilyWeights::default(),
            shapes: ShapeRanges::default(),
            placement_half_width: 2.5,
            gap_fraction: 0.05,
            placement_attempts: 200,
            sample_retries: 20,
            cloud_points: 1024,
            seed: 0,
        }
    }
}

impl GenerationConfig {
    pub fn beta0_values(&self) -> std::ops::RangeInclusive<usize> {
        self.beta0_min..=self.beta0_max
    }

    pub fn validate(&self) -> Result<()> {
        if self.beta0_min == 0 || self.beta0_min > self.beta0_max {
            return Err(invalid(format!(
                "need 1 <= beta0_min <= beta0_max, got {}..{}",
                self.beta0_min, self.beta0_max
            )));
        }
        if self.g_max > self.total_genus_max {
            return Err(invalid("g_max cannot exceed the total genus bound"));
        }
        if self.replicates == 0 || self.placement_attempts == 0 || self.sample_retries == 0 {
            return Err(invalid(
                "replicates, placement attempts and retries must be positive",
            ));
        }
        if self.cloud_points == 0 {
            return Err(invalid("cloud_points must be positive"));
        }
        if !(self.placement_half_width > 0.0 && self.placement_half_width.is_finite()) {
            return Err(invalid("placement half-width must be positive"));
        }
        if !(0.0..1.0).contains(&self.gap_fraction) {
            return Err(invalid("gap fraction must lie in [0, 1)"));
        }
        let f = &self.families;
        for (a, b) in [(f.superellipsoid, f.cone), (f.supertoroid, f.sdf_torus)] {
            if !(a >= 0.0 && b >= 0.0 && a + b > 0.0 && (a + b).is_finite()) {
                return Err(invalid(
                    "family weights must be non-negative with a positive sum",
                ));
            }
        }
        let s = &self.shapes;
        for (name, [lo, hi]) in [
            ("axis_scale", s.axis_scale),
            ("exponent", s.exponent),
            ("ring_radius", s.ring_radius),
            ("cone_radius", s.cone_radius),
            ("cone_height", s.cone_height),
            ("tube_radius", s.tube_radius),
            ("component_radius", s.component_radius),
        ] {
            if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
                return Err(invalid(format!("range {name} must satisfy 0 < lo <= hi")));
            }
        }
        if s.ring_radius[0] <= 1.0 {
            return Err(invalid("supertoroid ring radius must exceed 1"));
        }
        if s.tube_radius[1] >= 0.5 {
            return Err(invalid("SDF tube radius must stay below 0.5"));
        }
        if !(0.0..=60.0).contains(&s.chain_turn_degrees) {
            return Err(invalid("chain turn must lie in [0, 60] degrees"));
        }
        if !(s.softmin_sharpness > 0.0 && s.softmin_sharpness.is_finite()) {
            return Err(invalid("softmin sharpness must be positive"));
        }
        if s.grid_resolution < 16 || s.parametric_resolution.iter().any(|&n| n < 3) {
            return Err(invalid(
                "grid resolution must be at least 16 and mesh resolution at least 3",
            ));
        }
        if s.cone_segments < 3 {
            return Err(invalid("cones need at least 3 segments"));
        }
        if !(s.max_twist_rate >= 0.0 && s.max_twist_rate.is_finite()) {
            return Err(invalid("twist rate bound must be non-negative"));
        }
        Ok(())
    }
}

fn draw<R: rand::Rng + ?Sized>(rng: &mut R, [lo, hi]: [f64; 2]) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..hi)
    }
}
