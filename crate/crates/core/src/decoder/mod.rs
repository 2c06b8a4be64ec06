//! Forward-only set-prediction decoder: adapts encoder patch features,
//! runs learned queries through a transformer decoder with cross-attention,
//! and reads out persistence pairs with existence logits.

mod eval;
mod manifest;
mod model;

pub use eval::{evaluate, predict_diagram, EvalReport, SampleMetrics};
pub use manifest::{Tensor, WeightManifest, MANIFEST_VERSION};
pub use model::{heads, Decoder};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::vectorize::FeatureTensor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormPlacement {
    Pre,
    Post,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecoderConfig {
    pub queries: usize,
    pub feature_dim: usize,
    pub hidden: usize,
    pub heads: usize,
    pub blocks: usize,
    pub ffn: usize,
    /// Hidden width of the positional MLP on patch centers.
    pub pos_hidden: usize,
    /// Hidden width of the pair-head MLP.
    pub head_hidden: usize,
    /// Linear layers in the pair head.
    pub head_layers: usize,
    pub norm: NormPlacement,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        Self {
            queries: 250,
            feature_dim: 384,
            hidden: 256,
            heads: 8,
            blocks: 6,
            ffn: 2048,
            pos_hidden: 128,
            head_hidden: 256,
            head_layers: 3,
            norm: NormPlacement::Post,
        }
    }
}

impl DecoderConfig {
    pub fn validate(&self) -> Result<()> {
        let dims = [
            self.queries,
            self.feature_dim,
            self.hidden,
            self.heads,
            self.blocks,
            self.ffn,
            self.pos_hidden,
            self.head_hidden,
        ];
        if dims.contains(&0) {
            return Err(invalid(format!(
                "decoder dimensions must be positive: {self:?}"
            )));
        }
        if !self.hidden.is_multiple_of(self.heads) {
            return Err(invalid(format!(
                "hidden size {} is not divisible by {} heads",
                self.hidden, self.heads
            )));
        }
        if self.head_layers == 0 {
            return Err(invalid("pair head needs at least one layer"));
        }
        Ok(())
    }
}

/// How per-block encoder features are merged before adaptation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CombineMode {
    Last,
    Combined,
}

impl std::str::FromStr for CombineMode {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "last" => Ok(Self::Last),
            "combined" => Ok(Self::Combined),
            _ => Err(invalid(format!(
                "unknown combine mode {s:?} (last|combined)"
            ))),
        }
    }
}

/// Number of transformer blocks in the supported encoders.
pub const ENCODER_BLOCKS: usize = 12;

/// Patch features of one point cloud, one `n × feature_dim` matrix per
/// encoder block, with the `n × 3` patch centers.
#[derive(Debug, Clone, PartialEq)]
pub struct EncoderFeatures {
    pub blocks: Vec<DMatrix<f64>>,
    pub centers: DMatrix<f64>,
}

impl EncoderFeatures {
    pub fn new(blocks: Vec<DMatrix<f64>>, centers: DMatrix<f64>) -> Result<Self> {
        if blocks.len() != 1 && blocks.len() != ENCODER_BLOCKS {
            return Err(invalid(format!(
                "expected 1 or {ENCODER_BLOCKS} blocks, got {}",
                blocks.len()
            )));
        }
        let (n, d) = blocks[0].shape();
        if blocks.iter().any(|b| b.shape() != (n, d)) {
            return Err(invalid("encoder blocks have different shapes"));
        }
        if centers.shape() != (n, 3) {
            return Err(invalid(format!(
                "centers must be {n} × 3, got {:?}",
                centers.shape()
            )));
        }
        if blocks
            .iter()
            .chain(std::iter::once(&centers))
            .any(|m| m.iter().any(|v| !v.is_finite()))
        {
            return Err(invalid("encoder features contain non-finite values"));
        }
        Ok(Self { blocks, centers })
    }

    /// Builds features from tensors shaped `[n, d]` or `[12, n, d]`, and `[n, 3]`.
    pub fn from_tensors(features: &FeatureTensor, centers: &FeatureTensor) -> Result<Self> {
        let blocks = match features.dims.as_slice() {
            [_, _] => vec![features.to_matrix()],
            &[b, n, d] => (0..b)
                .map(|k| {
                    DMatrix::from_fn(n, d, |i, j| f64::from(features.data[(k * n + i) * d + j]))
                })
                .collect(),
            other => {
                return Err(invalid(format!(
                    "feature tensor must be [n, d] or [blocks, n, d], got {other:?}"
                )))
            }
        };
        if centers.dims.len() != 2 {
            return Err(invalid("centers tensor must be [n, 3]"));
        }
        Self::new(blocks, centers.to_matrix())
    }

    pub fn patches(&self) -> usize {
        self.centers.nrows()
    }
}

/// `last` keeps the final block; `combined` sums all blocks.
pub fn combine_blocks(features: &EncoderFeatures, mode: CombineMode) -> Result<DMatrix<f64>> {
    match mode {
        CombineMode::Last => Ok(features.blocks.last().expect("at least one block").clone()),
        CombineMode::Combined => {
            if features.blocks.len() != ENCODER_BLOCKS {
                return Err(invalid(format!(
                    "combined mode needs all {ENCODER_BLOCKS} blocks, got {}",
                    features.blocks.len()
                )));
            }
            let mut sum = features.blocks[0].clone();
            for b in &features.blocks[1..] {
                sum += b;
            }
            Ok(sum)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combine_modes() {
        let block = DMatrix::from_fn(4, 3, |i, j| (i * 3 + j) as f64);
        let centers = DMatrix::zeros(4, 3);
        let single = EncoderFeatures::new(vec![block.clone()], centers.clone()).unwrap();
        assert_eq!(combine_blocks(&single, CombineMode::Last).unwrap(), block);
        assert!(combine_blocks(&single, CombineMode::Combined).is_err());
        let twelve = EncoderFeatures::new(vec![block.clone(); 12], centers).unwrap();
        assert_eq!(
            combine_blocks(&twelve, CombineMode::Combined).unwrap(),
            &block * 12.0
        );
    }

    #[test]
    fn feature_validation() {
        let b = DMatrix::zeros(4, 3);
        assert!(EncoderFeatures::new(vec![b.clone(); 2], DMatrix::zeros(4, 3)).is_err());
        assert!(EncoderFeatures::new(vec![b.clone()], DMatrix::zeros(5, 3)).is_err());
        assert!(EncoderFeatures::new(vec![b], DMatrix::from_element(4, 3, f64::NAN)).is_err());
        assert!(DecoderConfig {
            hidden: 30,
            heads: 8,
            ..Default::default()
        }
        .validate()
        .is_err());
    }
}
