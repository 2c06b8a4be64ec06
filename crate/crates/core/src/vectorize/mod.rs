//! Diagram vectorizations, linear CKA alignment between feature sets, and
//! linear probing of encoder features.

mod cka;
pub mod features;
mod probe;
mod quantize;
mod topk;

pub use cka::{linear_cka, permutation_ablation};
pub use features::{FeatureMeta, FeatureTensor};
pub use probe::{fit_softmax, train_linear_probe, ProbeConfig, ProbeReport, SoftmaxModel};
pub use quantize::{atol_like_vectorize, fit_quantization_centers, QuantizationCenters};
pub use topk::topk_vectorize;

use nalgebra::DMatrix;

/// Stacks equal-length rows into an `n × d` matrix.
pub fn rows_to_matrix(rows: &[Vec<f64>]) -> crate::Result<DMatrix<f64>> {
    let d = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != d) {
        return Err(crate::error::invalid("rows have different lengths"));
    }
    Ok(DMatrix::from_fn(rows.len(), d, |i, j| rows[i][j]))
}
