use rand::Rng;
use serde::{Deserialize, Serialize};

use super::GenerationConfig;
use crate::error::Result;
use crate::rng;

/// Requested global topology of one sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LabelPair {
    pub beta0: usize,
    pub genus_total: usize,
}

/// `counts[j]` components of genus `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GenusDecomposition {
    pub counts: Vec<usize>,
}

impl GenusDecomposition {
    pub fn beta0(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn genus_total(&self) -> usize {
        self.counts.iter().enumerate().map(|(j, &x)| j * x).sum()
    }

    /// Per-component genera in ascending order, e.g. `[1, 2]` for counts `[0, 1, 1]`.
    pub fn component_genera(&self) -> Vec<usize> {
        self.counts
            .iter()
            .enumerate()
            .flat_map(|(j, &x)| std::iter::repeat_n(j, x))
            .collect()
    }

    pub fn matches(&self, label: &LabelPair) -> bool {
        self.beta0() == label.beta0 && self.genus_total() == label.genus_total
    }
}

/// `replicates` labels per β0, genus uniform on `0..=G_max` with rejection above
/// `min(G_max, β0 g_max)`. Ordered by β0.
pub fn sample_labels(config: &GenerationConfig) -> Result<Vec<LabelPair>> {
    config.validate()?;
    let mut rng = rng::stream(config.seed, "labels");
    let mut out = Vec::with_capacity(config.beta0_values().count() * config.replicates);
    for beta0 in config.beta0_values() {
        let bound = config.total_genus_max.min(beta0 * config.g_max);
        for _ in 0..config.replicates {
            let genus_total = loop {
                let s = rng.random_range(0..=config.total_genus_max);
                if s <= bound {
                    break s;
                }
            };
            out.push(LabelPair { beta0, genus_total });
        }
    }
    Ok(out)
}

/// Every way to split `genus_total` over `beta0` components of genus at most `g_max`.
pub fn enumerate_genus_decompositions(
    beta0: usize,
    genus_total: i64,
    g_max: usize,
) -> Vec<GenusDecomposition> {
    let mut out = Vec::new();
    if beta0 == 0 || genus_total < 0 || genus_total > (g_max * beta0) as i64 {
        return out;
    }
    let mut x = Vec::with_capacity(g_max + 1);
    backtrack(beta0, genus_total as usize, 0, g_max, &mut x, &mut out);
    out
}

fn backtrack(
    count: usize,
    sum: usize,
    k: usize,
    g_max: usize,
    x: &mut Vec<usize>,
    out: &mut Vec<GenusDecomposition>,
) {
    if k > g_max {
        if count == 0 && sum == 0 {
            out.push(GenusDecomposition { counts: x.clone() });
        }
        return;
    }
    let upper = sum.checked_div(k).map_or(count, |q| count.min(q));
    for n in 0..=upper {
        x.push(n);
        backtrack(count - n, sum - k * n, k + 1, g_max, x, out);
        x.pop();
    }
}

/// Uniform choice among the enumerated decompositions.
pub fn pick_decomposition<R: Rng + ?Sized>(
    label: &LabelPair,
    g_max: usize,
    rng: &mut R,
) -> Option<GenusDecomposition> {
    let mut all = enumerate_genus_decompositions(label.beta0, label.genus_total as i64, g_max);
    if all.is_empty() {
        return None;
    }
    let i = rng.random_range(0..all.len());
    Some(all.swap_remove(i))
}
