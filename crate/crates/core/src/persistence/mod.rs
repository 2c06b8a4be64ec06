//! Vietoris–Rips persistent homology in dimensions 0 and 1, plus the
//! thresholding and dataset scaling used to build prediction targets.

pub mod io;
mod reduce;
mod rips;
mod targets;

pub use reduce::{compute_diagrams, compute_persistence};
pub use rips::{rips_filtration, Filtration, RipsConfig, Simplex};
pub use targets::{quantile_threshold, scale_dataset};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PersistencePair {
    pub birth: f64,
    pub death: f64,
}

impl PersistencePair {
    pub fn new(birth: f64, death: f64) -> Self {
        Self { birth, death }
    }

    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }
}

/// Where a diagram came from and how it was rescaled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub filtration: String,
    pub point_count: usize,
    pub max_edge: f64,
    /// Coordinates have been divided by this factor.
    pub scale: f64,
}

impl Default for Provenance {
    fn default() -> Self {
        Self {
            filtration: "vietoris-rips".into(),
            point_count: 0,
            max_edge: f64::INFINITY,
            scale: 1.0,
        }
    }
}

/// Persistence diagram of one homology dimension.
///
/// `pairs` holds the finite pairs (death > birth). Classes still alive at the
/// filtration's edge cap are kept apart in `essential`, with death set to
/// the cap.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PersistenceDiagram {
    pub dimension: usize,
    pub pairs: Vec<PersistencePair>,
    pub essential: Vec<PersistencePair>,
    pub provenance: Provenance,
}

impl PersistenceDiagram {
    pub fn new(dimension: usize, pairs: Vec<PersistencePair>) -> Self {
        Self {
            dimension,
            pairs,
            ..Default::default()
        }
    }

    pub fn from_tuples(dimension: usize, pairs: &[(f64, f64)]) -> Self {
        Self::new(
            dimension,
            pairs
                .iter()
                .map(|&(b, d)| PersistencePair::new(b, d))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Pairs sorted by (birth, death); handy for multiset comparisons.
    pub fn sorted_pairs(&self) -> Vec<PersistencePair> {
        let mut v = self.pairs.clone();
        v.sort_by(|a, b| {
            a.birth
                .total_cmp(&b.birth)
                .then(a.death.total_cmp(&b.death))
        });
        v
    }

    /// Number of bars (finite and essential) alive at `eps`.
    pub fn alive_at(&self, eps: f64) -> usize {
        let finite = self
            .pairs
            .iter()
            .filter(|p| p.birth <= eps && eps < p.death)
            .count();
        let essential = self.essential.iter().filter(|p| p.birth <= eps).count();
        finite + essential
    }
}
