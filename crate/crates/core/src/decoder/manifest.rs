//! Weight manifests: a JSON index (config, tensor names, shapes and byte
//! offsets) next to a raw little-endian `f32` payload.
//!
//! Linear layers store their weight as `[in, out]` row-major, so a layer
//! computes `x · W + b` on row vectors.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::DecoderConfig;
use crate::error::{invalid, Error, Result};
use crate::rng;

pub const MANIFEST_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    pub shape: Vec<usize>,
    pub data: Vec<f32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightManifest {
    pub config: DecoderConfig,
    pub source: String,
    pub tensors: BTreeMap<String, Tensor>,
}

#[derive(Serialize, Deserialize)]
struct TensorEntry {
    name: String,
    shape: Vec<usize>,
    offset: usize,
}

#[derive(Serialize, Deserialize)]
struct ManifestFile {
    format_version: u32,
    source: String,
    config: DecoderConfig,
    payload: String,
    tensors: Vec<TensorEntry>,
}

/// Kind of initial value a parameter gets in generated manifests.
#[derive(Clone, Copy, PartialEq)]
enum Role {
    Weight { fan_in: usize },
    Bias,
    NormScale,
    NormShift,
    Embedding,
}

fn linear(out: &mut Vec<(String, Vec<usize>, Role)>, name: &str, fan_in: usize, fan_out: usize) {
    out.push((
        format!("{name}.weight"),
        vec![fan_in, fan_out],
        Role::Weight { fan_in },
    ));
    out.push((format!("{name}.bias"), vec![fan_out], Role::Bias));
}

fn norm(out: &mut Vec<(String, Vec<usize>, Role)>, name: &str, dim: usize) {
    out.push((format!("{name}.weight"), vec![dim], Role::NormScale));
    out.push((format!("{name}.bias"), vec![dim], Role::NormShift));
}

fn layout(c: &DecoderConfig) -> Vec<(String, Vec<usize>, Role)> {
    let d = c.hidden;
    let mut out = vec![(
        "query_embed".to_string(),
        vec![c.queries, d],
        Role::Embedding,
    )];
    norm(&mut out, "adapter.norm", c.feature_dim);
    linear(&mut out, "adapter.proj", c.feature_dim, d);
    linear(&mut out, "pos.0", 3, c.pos_hidden);
    linear(&mut out, "pos.1", c.pos_hidden, d);
    for k in 0..c.blocks {
        for attn in ["self_attn", "cross_attn"] {
            for p in ["q", "k", "v", "out"] {
                linear(&mut out, &format!("blocks.{k}.{attn}.{p}"), d, d);
            }
        }
        linear(&mut out, &format!("blocks.{k}.ffn.0"), d, c.ffn);
        linear(&mut out, &format!("blocks.{k}.ffn.1"), c.ffn, d);
        for n in 1..=3 {
            norm(&mut out, &format!("blocks.{k}.norm{n}"), d);
        }
    }
    norm(&mut out, "final_norm", d);
    for l in 0..c.head_layers {
        let fan_in = if l == 0 { d } else { c.head_hidden };
        let fan_out = if l + 1 == c.head_layers {
            2
        } else {
            c.head_hidden
        };
        linear(&mut out, &format!("pair_head.{l}"), fan_in, fan_out);
    }
    linear(&mut out, "exist_head", d, 1);
    out
}

impl WeightManifest {
    /// Parameter names and shapes required by `config`, in storage order.
    pub fn schema(config: &DecoderConfig) -> Vec<(String, Vec<usize>)> {
        layout(config).into_iter().map(|(n, s, _)| (n, s)).collect()
    }

    /// Uniform(±1/√fan_in) weights, small biases, near-unit norm scales.
    pub fn random(config: &DecoderConfig, seed: u64) -> Result<Self> {
        config.validate()?;
        let mut r = rng::stream(seed, "decoder-weights");
        let tensors = layout(config)
            .into_iter()
            .map(|(name, shape, role)| {
                let len: usize = shape.iter().product();
                let data = (0..len)
                    .map(|_| {
                        let v: f64 = match role {
                            Role::Weight { fan_in } => {
                                let a = 1.0 / (fan_in as f64).sqrt();
                                r.random_range(-a..a)
                            }
                            Role::Bias | Role::NormShift => r.random_range(-0.1..0.1),
                            Role::NormScale => r.random_range(0.9..1.1),
                            Role::Embedding => r.random_range(-1.0..1.0),
                        };
                        v as f32
                    })
                    .collect();
                (name, Tensor { shape, data })
            })
            .collect();
        Ok(Self {
            config: config.clone(),
            source: format!("random initialization, seed {seed}"),
            tensors,
        })
    }

    /// All linear maps zero, norms identity, query embeddings kept from `queries`.
    pub fn zero_maps(config: &DecoderConfig, queries: Vec<f32>) -> Result<Self> {
        config.validate()?;
        let mut tensors = BTreeMap::new();
        for (name, shape, role) in layout(config) {
            let len: usize = shape.iter().product();
            let data = match role {
                Role::NormScale => vec![1.0; len],
                Role::Embedding => queries.clone(),
                _ => vec![0.0; len],
            };
            tensors.insert(name, Tensor { shape, data });
        }
        let m = Self {
            config: config.clone(),
            source: "zero linear maps".into(),
            tensors,
        };
        m.validate()?;
        Ok(m)
    }

    /// Checks that every tensor of the schema is present with its exact shape.
    pub fn validate(&self) -> Result<()> {
        self.config.validate()?;
        let schema = Self::schema(&self.config);
        for (name, shape) in &schema {
            let t = self
                .tensors
                .get(name)
                .ok_or_else(|| invalid(format!("missing tensor {name}")))?;
            if &t.shape != shape {
                return Err(invalid(format!(
                    "tensor {name} has shape {:?}, expected {shape:?}",
                    t.shape
                )));
            }
            if t.data.len() != shape.iter().product::<usize>() {
                return Err(invalid(format!(
                    "tensor {name} has {} values for shape {shape:?}",
                    t.data.len()
                )));
            }
        }
        if self.tensors.len() != schema.len() {
            let extra: Vec<&String> = self
                .tensors
                .keys()
                .filter(|k| !schema.iter().any(|(n, _)| n == *k))
                .collect();
            return Err(invalid(format!("unexpected tensors {extra:?}")));
        }
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&Tensor> {
        self.tensors
            .get(name)
            .ok_or_else(|| invalid(format!("missing tensor {name}")))
    }

    fn payload_path(index: &Path) -> PathBuf {
        index.with_extension("bin")
    }

    /// Writes `path` (JSON index) and the payload next to it with extension `.bin`.
    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        self.validate()?;
        let path = path.as_ref();
        let payload_path = Self::payload_path(path);
        let mut payload = Vec::new();
        let mut entries = Vec::new();
        for (name, shape) in Self::schema(&self.config) {
            entries.push(TensorEntry {
                name: name.clone(),
                shape,
                offset: payload.len(),
            });
            for v in &self.tensors[&name].data {
                payload.extend_from_slice(&v.to_le_bytes());
            }
        }
        let index = ManifestFile {
            format_version: MANIFEST_VERSION,
            source: self.source.clone(),
            config: self.config.clone(),
            payload: payload_path
                .file_name()
                .unwrap()
                .to_string_lossy()
                .into_owned(),
            tensors: entries,
        };
        fs::write(&payload_path, payload)?;
        fs::write(path, serde_json::to_string_pretty(&index)?)?;
        Ok(())
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let index: ManifestFile = serde_json::from_str(&fs::read_to_string(path)?)?;
        if index.format_version != MANIFEST_VERSION {
            return Err(Error::Format(format!(
                "unsupported manifest version {}",
                index.format_version
            )));
        }
        let payload = fs::read(path.with_file_name(&index.payload))?;
        let mut tensors = BTreeMap::new();
        for e in index.tensors {
            let len: usize = e.shape.iter().product();
            let bytes = payload
                .get(e.offset..e.offset + 4 * len)
                .ok_or_else(|| Error::Format(format!("tensor {} runs past the payload", e.name)))?;
            let data = bytes
                .chunks_exact(4)
                .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
                .collect();
            tensors.insert(
                e.name,
                Tensor {
                    shape: e.shape,
                    data,
                },
            );
        }
        let m = Self {
            config: index.config,
            source: index.source,
            tensors,
        };
        m.validate()?;
        Ok(m)
    }
}
