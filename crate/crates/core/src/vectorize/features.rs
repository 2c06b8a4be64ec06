//! Feature tensors ingested from external encoders.
//!
//! FTN1 layout, little endian: the magic `FTN1`, a `u32` dimension count, the
//! `u32` dimensions, then the row-major `f32` values. Metadata lives in a JSON
//! sidecar next to the binary file (`<file>.json`).

use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub const FTN_MAGIC: &[u8; 4] = b"FTN1";

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FeatureMeta {
    pub encoder: String,
    /// 1-based transformer block index.
    pub block: Option<usize>,
    /// `cls` or `max`.
    pub pooling: Option<String>,
    pub point_count: Option<usize>,
}

impl FeatureMeta {
    pub fn validate(&self) -> Result<()> {
        if let Some(b) = self.block {
            if !(1..=12).contains(&b) {
                return Err(invalid(format!("block index {b} outside 1..=12")));
            }
        }
        if let Some(p) = &self.pooling {
            if p != "cls" && p != "max" {
                return Err(invalid(format!("unknown pooling {p:?}")));
            }
        }
        Ok(())
    }
}

/// Sample-major tensor: `dims[0]` is the sample count.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTensor {
    pub dims: Vec<usize>,
    pub data: Vec<f32>,
    pub meta: FeatureMeta,
}

impl FeatureTensor {
    pub fn new(dims: Vec<usize>, data: Vec<f32>, meta: FeatureMeta) -> Result<Self> {
        if dims.is_empty() {
            return Err(invalid("feature tensor needs at least one dimension"));
        }
        if dims.iter().product::<usize>() != data.len() {
            return Err(invalid(format!(
                "dims {dims:?} do not match {} values",
                data.len()
            )));
        }
        meta.validate()?;
        Ok(Self { dims, data, meta })
    }

    pub fn from_matrix(m: &DMatrix<f64>, meta: FeatureMeta) -> Result<Self> {
        let data = (0..m.nrows())
            .flat_map(|i| (0..m.ncols()).map(move |j| m[(i, j)] as f32))
            .collect();
        Self::new(vec![m.nrows(), m.ncols()], data, meta)
    }

    pub fn samples(&self) -> usize {
        self.dims[0]
    }

    /// Values per sample.
    pub fn sample_len(&self) -> usize {
        self.dims[1..].iter().product()
    }

    /// One flattened row per sample.
    pub fn to_matrix(&self) -> DMatrix<f64> {
        let d = self.sample_len();
        DMatrix::from_fn(self.samples(), d, |i, j| f64::from(self.data[i * d + j]))
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 + 4 * (self.dims.len() + self.data.len()));
        out.extend_from_slice(FTN_MAGIC);
        out.extend_from_slice(&(self.dims.len() as u32).to_le_bytes());
        for &d in &self.dims {
            out.extend_from_slice(&(d as u32).to_le_bytes());
        }
        for v in &self.data {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8], meta: FeatureMeta) -> Result<Self> {
        let bad = |m: &str| Error::Format(format!("FTN1: {m}"));
        let word = |at: usize| -> Result<u32> {
            bytes
                .get(at..at + 4)
                .map(|b| u32::from_le_bytes(b.try_into().unwrap()))
                .ok_or_else(|| bad("truncated header"))
        };
        if bytes.get(..4) != Some(FTN_MAGIC.as_slice()) {
            return Err(bad("bad magic"));
        }
        let ndims = word(4)? as usize;
        let dims: Vec<usize> = (0..ndims)
            .map(|i| word(8 + 4 * i).map(|v| v as usize))
            .collect::<Result<_>>()?;
        let start = 8 + 4 * ndims;
        let count: usize = dims.iter().product();
        if bytes.len() != start + 4 * count {
            return Err(bad("payload length does not match dims"));
        }
        let data = bytes[start..]
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Self::new(dims, data, meta)
    }

    pub fn sidecar_path(path: &Path) -> PathBuf {
        let mut s = path.as_os_str().to_owned();
        s.push(".json");
        PathBuf::from(s)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_bytes())?;
        fs::write(
            Self::sidecar_path(path),
            serde_json::to_string_pretty(&self.meta)?,
        )?;
        Ok(())
    }

    /// Reads the tensor; a missing sidecar yields default metadata.
    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let sidecar = Self::sidecar_path(path);
        let meta = if sidecar.exists() {
            serde_json::from_str(&fs::read_to_string(sidecar)?)?
        } else {
            FeatureMeta::default()
        };
        Self::from_bytes(&fs::read(path)?, meta)
    }
}
