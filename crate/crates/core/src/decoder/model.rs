use nalgebra::{DMatrix, RowDVector};

use super::{
    combine_blocks, CombineMode, DecoderConfig, EncoderFeatures, NormPlacement, WeightManifest,
};
use crate::error::{invalid, Error, Result};
use crate::persistence::PersistencePair;
use crate::set_prediction::{sigmoid, softplus, PredictionSet};

pub const LAYER_NORM_EPS: f64 = 1e-5;

fn matrix(m: &WeightManifest, name: &str) -> Result<DMatrix<f64>> {
    let t = m.get(name)?;
    let (rows, cols) = match t.shape.as_slice() {
        [r, c] => (*r, *c),
        _ => return Err(invalid(format!("{name} is not a matrix"))),
    };
    Ok(DMatrix::from_row_iterator(
        rows,
        cols,
        t.data.iter().map(|&v| f64::from(v)),
    ))
}

fn vector(m: &WeightManifest, name: &str) -> Result<RowDVector<f64>> {
    let t = m.get(name)?;
    Ok(RowDVector::from_iterator(
        t.data.len(),
        t.data.iter().map(|&v| f64::from(v)),
    ))
}

struct Linear {
    w: DMatrix<f64>,
    b: RowDVector<f64>,
}

impl Linear {
    fn load(m: &WeightManifest, name: &str) -> Result<Self> {
        Ok(Self {
            w: matrix(m, &format!("{name}.weight"))?,
            b: vector(m, &format!("{name}.bias"))?,
        })
    }

    fn apply(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        let mut y = x * &self.w;
        for mut row in y.row_iter_mut() {
            row += &self.b;
        }
        y
    }
}

struct LayerNorm {
    scale: RowDVector<f64>,
    shift: RowDVector<f64>,
}

impl LayerNorm {
    fn load(m: &WeightManifest, name: &str) -> Result<Self> {
        Ok(Self {
            scale: vector(m, &format!("{name}.weight"))?,
            shift: vector(m, &format!("{name}.bias"))?,
        })
    }

    fn apply(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        let mut y = x.clone();
        for mut row in y.row_iter_mut() {
            let n = row.len() as f64;
            let mean = row.sum() / n;
            let var = row.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
            let inv = 1.0 / (var + LAYER_NORM_EPS).sqrt();
            for j in 0..row.len() {
                row[j] = (row[j] - mean) * inv * self.scale[j] + self.shift[j];
            }
        }
        y
    }
}

fn relu(mut x: DMatrix<f64>) -> DMatrix<f64> {
    x.apply(|v| *v = v.max(0.0));
    x
}

struct Attention {
    q: Linear,
    k: Linear,
    v: Linear,
    out: Linear,
    heads: usize,
}

impl Attention {
    fn load(m: &WeightManifest, name: &str, heads: usize) -> Result<Self> {
        Ok(Self {
            q: Linear::load(m, &format!("{name}.q"))?,
            k: Linear::load(m, &format!("{name}.k"))?,
            v: Linear::load(m, &format!("{name}.v"))?,
            out: Linear::load(m, &format!("{name}.out"))?,
            heads,
        })
    }

    /// Multi-head scaled dot-product attention. The second value is the
    /// largest deviation of a softmax row sum from 1.
    fn apply(
        &self,
        query: &DMatrix<f64>,
        key: &DMatrix<f64>,
        value: &DMatrix<f64>,
    ) -> (DMatrix<f64>, f64) {
        let (q, k, v) = (self.q.apply(query), self.k.apply(key), self.v.apply(value));
        let d = q.ncols();
        let dh = d / self.heads;
        let scale = 1.0 / (dh as f64).sqrt();
        let mut concat = DMatrix::zeros(q.nrows(), d);
        let mut deviation: f64 = 0.0;
        for h in 0..self.heads {
            let (qh, kh, vh) = (
                q.columns(h * dh, dh),
                k.columns(h * dh, dh),
                v.columns(h * dh, dh),
            );
            let mut scores = qh * kh.transpose() * scale;
            for mut row in scores.row_iter_mut() {
                let max = row.max();
                row.apply(|s| *s = (*s - max).exp());
                let sum = row.sum();
                row /= sum;
                deviation = deviation.max((row.sum() - 1.0).abs());
            }
            concat.columns_mut(h * dh, dh).copy_from(&(scores * vh));
        }
        (self.out.apply(&concat), deviation)
    }
}

struct Block {
    self_attn: Attention,
    cross_attn: Attention,
    ffn0: Linear,
    ffn1: Linear,
    norms: [LayerNorm; 3],
}

/// Decoder weights converted to `f64` for evaluation.
pub struct Decoder {
    config: DecoderConfig,
    queries: DMatrix<f64>,
    adapter_norm: LayerNorm,
    adapter_proj: Linear,
    pos: [Linear; 2],
    blocks: Vec<Block>,
    final_norm: LayerNorm,
    pair_head: Vec<Linear>,
    exist_head: Linear,
}

fn check(x: &DMatrix<f64>, block: usize, site: &str) -> Result<()> {
    if x.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NumericOverflow {
            block,
            site: site.into(),
        })
    }
}

impl Decoder {
    pub fn from_manifest(m: &WeightManifest) -> Result<Self> {
        m.validate()?;
        let c = &m.config;
        let blocks = (0..c.blocks)
            .map(|k| {
                Ok(Block {
                    self_attn: Attention::load(m, &format!("blocks.{k}.self_attn"), c.heads)?,
                    cross_attn: Attention::load(m, &format!("blocks.{k}.cross_attn"), c.heads)?,
                    ffn0: Linear::load(m, &format!("blocks.{k}.ffn.0"))?,
                    ffn1: Linear::load(m, &format!("blocks.{k}.ffn.1"))?,
                    norms: [
                        LayerNorm::load(m, &format!("blocks.{k}.norm1"))?,
                        LayerNorm::load(m, &format!("blocks.{k}.norm2"))?,
                        LayerNorm::load(m, &format!("blocks.{k}.norm3"))?,
                    ],
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            config: c.clone(),
            queries: matrix(m, "query_embed")?,
            adapter_norm: LayerNorm::load(m, "adapter.norm")?,
            adapter_proj: Linear::load(m, "adapter.proj")?,
            pos: [Linear::load(m, "pos.0")?, Linear::load(m, "pos.1")?],
            blocks,
            final_norm: LayerNorm::load(m, "final_norm")?,
            pair_head: (0..c.head_layers)
                .map(|l| Linear::load(m, &format!("pair_head.{l}")))
                .collect::<Result<_>>()?,
            exist_head: Linear::load(m, "exist_head")?,
        })
    }

    pub fn config(&self) -> &DecoderConfig {
        &self.config
    }

    /// Layer-normalized, projected patch tokens and the positional encodings of their centers.
    pub fn adapt(
        &self,
        features: &DMatrix<f64>,
        centers: &DMatrix<f64>,
    ) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
        if features.ncols() != self.config.feature_dim {
            return Err(invalid(format!(
                "features have {} columns, the adapter expects {}",
                features.ncols(),
                self.config.feature_dim
            )));
        }
        if centers.shape() != (features.nrows(), 3) {
            return Err(invalid(format!(
                "centers must be {} × 3, got {:?}",
                features.nrows(),
                centers.shape()
            )));
        }
        let tokens = self.adapter_proj.apply(&self.adapter_norm.apply(features));
        let pos = self.pos[1].apply(&relu(self.pos[0].apply(centers)));
        check(&tokens, 0, "adapter")?;
        check(&pos, 0, "positional encoding")?;
        Ok((tokens, pos))
    }

    /// Query states after all decoder blocks and the final norm.
    pub fn decode(&self, tokens: &DMatrix<f64>, pos: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        self.decode_traced(tokens, pos).map(|(x, _)| x)
    }

    /// As [`Decoder::decode`], also returning the largest softmax row-sum deviation from 1.
    pub fn decode_traced(
        &self,
        tokens: &DMatrix<f64>,
        pos: &DMatrix<f64>,
    ) -> Result<(DMatrix<f64>, f64)> {
        if tokens.shape() != pos.shape()
            || tokens.ncols() != self.config.hidden
            || tokens.nrows() == 0
        {
            return Err(invalid(format!(
                "tokens {:?} and positions {:?} must both be n × {}",
                tokens.shape(),
                pos.shape(),
                self.config.hidden
            )));
        }
        let keys = tokens + pos;
        let mut x = self.queries.clone();
        let mut deviation: f64 = 0.0;
        for (k, b) in self.blocks.iter().enumerate() {
            let block = k + 1;
            let pre = self.config.norm == NormPlacement::Pre;

            let input = if pre { b.norms[0].apply(&x) } else { x.clone() };
            let (sa, dev) = b.self_attn.apply(&input, &input, &input);
            deviation = deviation.max(dev);
            x += sa;
            if !pre {
                x = b.norms[0].apply(&x);
            }
            check(&x, block, "self-attention")?;

            let input = if pre { b.norms[1].apply(&x) } else { x.clone() };
            let (ca, dev) = b.cross_attn.apply(&input, &keys, tokens);
            deviation = deviation.max(dev);
            x += ca;
            if !pre {
                x = b.norms[1].apply(&x);
            }
            check(&x, block, "cross-attention")?;

            let input = if pre { b.norms[2].apply(&x) } else { x.clone() };
            x += b.ffn1.apply(&relu(b.ffn0.apply(&input)));
            if !pre {
                x = b.norms[2].apply(&x);
            }
            check(&x, block, "feed-forward")?;
        }
        let x = self.final_norm.apply(&x);
        check(&x, self.config.blocks, "final norm")?;
        Ok((x, deviation))
    }

    /// Full pipeline from encoder features to the predicted set.
    pub fn forward(&self, features: &EncoderFeatures, mode: CombineMode) -> Result<PredictionSet> {
        let combined = combine_blocks(features, mode)?;
        let (tokens, pos) = self.adapt(&combined, &features.centers)?;
        let states = self.decode(&tokens, &pos)?;
        heads(&states, self)
    }
}

/// Pair and existence heads: `b = σ(p₁)`, `d = b + softplus(p₂)`.
///
/// When `softplus(p₂)` is below the resolution of `b`, `d` is the next
/// representable value above `b`.
pub fn heads(states: &DMatrix<f64>, decoder: &Decoder) -> Result<PredictionSet> {
    let mut h = states.clone();
    let last = decoder.pair_head.len() - 1;
    for (l, layer) in decoder.pair_head.iter().enumerate() {
        h = layer.apply(&h);
        if l < last {
            h = relu(h);
        }
    }
    let logits = decoder.exist_head.apply(states);
    check(&h, 0, "pair head")?;
    check(&logits, 0, "existence head")?;
    let pairs = h
        .row_iter()
        .map(|row| pair_from_logits(row[0], row[1]))
        .collect();
    PredictionSet::new(pairs, logits.column(0).iter().copied().collect())
}

pub(crate) fn pair_from_logits(p1: f64, p2: f64) -> PersistencePair {
    let b = sigmoid(p1);
    let d = (b + softplus(p2)).max(b.next_up());
    PersistencePair::new(b, d)
}
