use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::persistence::PersistenceDiagram;
use crate::rng;

const LLOYD_ITERATIONS: usize = 100;
const SCALE_FLOOR: f64 = 1e-6;

/// k-means centers in the (birth, death) plane with a length scale per center.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantizationCenters {
    pub centers: Vec<[f64; 2]>,
    pub scales: Vec<f64>,
}

fn dist2(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)
}

fn nearest(p: [f64; 2], centers: &[[f64; 2]]) -> usize {
    let mut best = 0;
    for (j, &c) in centers.iter().enumerate().skip(1) {
        if dist2(p, c) < dist2(p, centers[best]) {
            best = j;
        }
    }
    best
}

/// k-means++ seeding followed by a fixed number of Lloyd iterations on the
/// union of all diagram points.
pub fn fit_quantization_centers(
    diagrams: &[PersistenceDiagram],
    n_centers: usize,
    seed: u64,
) -> Result<QuantizationCenters> {
    let points: Vec<[f64; 2]> = diagrams
        .iter()
        .flat_map(|d| d.pairs.iter().map(|p| [p.birth, p.death]))
        .collect();
    if n_centers == 0 || points.len() < n_centers {
        return Err(invalid(format!(
            "{} diagram points cannot support {n_centers} centers",
            points.len()
        )));
    }
    let mut rng = rng::stream(seed, "quantization-init");
    let mut centers = vec![points[rng.random_range(0..points.len())]];
    while centers.len() < n_centers {
        let weights: Vec<f64> = points
            .iter()
            .map(|&p| dist2(p, centers[nearest(p, &centers)]))
            .collect();
        let pick = match WeightedIndex::new(&weights) {
            Ok(w) => w.sample(&mut rng),
            Err(_) => rng.random_range(0..points.len()),
        };
        centers.push(points[pick]);
    }

    let mut labels = vec![0; points.len()];
    for _ in 0..LLOYD_ITERATIONS {
        for (l, &p) in labels.iter_mut().zip(&points) {
            *l = nearest(p, &centers);
        }
        let mut sums = vec![[0.0, 0.0, 0.0]; n_centers];
        for (&l, p) in labels.iter().zip(&points) {
            sums[l][0] += p[0];
            sums[l][1] += p[1];
            sums[l][2] += 1.0;
        }
        let mut moved = false;
        for (c, s) in centers.iter_mut().zip(&sums) {
            if s[2] > 0.0 {
                let next = [s[0] / s[2], s[1] / s[2]];
                moved |= next != *c;
                *c = next;
            }
        }
        if !moved {
            break;
        }
    }
    for (l, &p) in labels.iter_mut().zip(&points) {
        *l = nearest(p, &centers);
    }

    let scales = (0..n_centers)
        .map(|j| {
            let d: Vec<f64> = labels
                .iter()
                .zip(&points)
                .filter(|(&l, _)| l == j)
                .map(|(_, &p)| dist2(p, centers[j]).sqrt())
                .collect();
            let mean = if d.is_empty() {
                0.0
            } else {
                d.iter().sum::<f64>() / d.len() as f64
            };
            mean.max(SCALE_FLOOR)
        })
        .collect();
    Ok(QuantizationCenters { centers, scales })
}

/// Feature `j` is `Σ_pairs exp(−‖pair − c_j‖ / s_j)`.
pub fn atol_like_vectorize(diagram: &PersistenceDiagram, q: &QuantizationCenters) -> Vec<f64> {
    q.centers
        .iter()
        .zip(&q.scales)
        .map(|(&c, &s)| {
            diagram
                .pairs
                .iter()
                .map(|p| (-dist2([p.birth, p.death], c).sqrt() / s).exp())
                .sum()
        })
        .collect()
}
