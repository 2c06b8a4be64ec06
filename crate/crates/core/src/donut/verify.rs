use serde::{Deserialize, Serialize};

use super::LabelPair;
use crate::geometry::{split_components, MeshTopology, TriangleMesh};

/// Invariants measured on a generated sample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelReport {
    pub beta0_measured: usize,
    pub genus_total_measured: i64,
    /// Every component is a closed 2-manifold with even χ ≤ 2.
    pub manifold: bool,
    pub component_genera: Vec<i64>,
}

impl LabelReport {
    pub fn matches(&self, label: &LabelPair) -> bool {
        self.manifold
            && self.beta0_measured == label.beta0
            && self.genus_total_measured == label.genus_total as i64
    }
}

/// Counts connected components over all meshes and sums `(2 − χ)/2` over them.
pub fn verify_labels(meshes: &[TriangleMesh]) -> LabelReport {
    let mut manifold = true;
    let mut component_genera = Vec::new();
    for mesh in meshes {
        for part in split_components(mesh) {
            let t = MeshTopology::of(&part);
            match t.genus() {
                Some(g) => component_genera.push(i64::from(g)),
                None => {
                    manifold = false;
                    component_genera.push((2 - t.euler).div_euclid(2));
                }
            }
        }
    }
    component_genera.sort_unstable();
    LabelReport {
        beta0_measured: component_genera.len(),
        genus_total_measured: component_genera.iter().sum(),
        manifold,
        component_genera,
    }
}
