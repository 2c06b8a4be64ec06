use rayon::prelude::*;
use serde::Serialize;

use super::{CombineMode, Decoder, EncoderFeatures};
use crate::error::{invalid, Result};
use crate::metrics::{bottleneck, persistence_image, pie, wasserstein2, ImageParams};
use crate::persistence::PersistenceDiagram;

/// Runs the decoder and keeps pairs with existence probability ≥ `threshold`,
/// or all queries when no threshold is given.
pub fn predict_diagram(
    features: &EncoderFeatures,
    decoder: &Decoder,
    mode: CombineMode,
    threshold: Option<f64>,
) -> Result<PersistenceDiagram> {
    let pred = decoder.forward(features, mode)?;
    let pairs = match threshold {
        None => pred.pairs,
        Some(t) => {
            let existence = pred.existence();
            pred.pairs
                .into_iter()
                .zip(existence)
                .filter(|(_, p)| *p >= t)
                .map(|(pair, _)| pair)
                .collect()
        }
    };
    Ok(PersistenceDiagram::new(1, pairs))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleMetrics {
    pub w2: f64,
    pub bottleneck: f64,
    pub pie: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub mean_w2: f64,
    pub mean_bottleneck: f64,
    pub mean_pie: f64,
    pub samples: Vec<SampleMetrics>,
}

impl EvalReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("sample,w2,bottleneck,pie\n");
        for (i, s) in self.samples.iter().enumerate() {
            out.push_str(&format!("{i},{:?},{:?},{:?}\n", s.w2, s.bottleneck, s.pie));
        }
        out.push_str(&format!(
            "mean,{:?},{:?},{:?}\n",
            self.mean_w2, self.mean_bottleneck, self.mean_pie
        ));
        out
    }
}

/// Per-sample W2, bottleneck and PIE, averaged. Predictions should already
/// be existence-thresholded.
pub fn evaluate(
    pred: &[PersistenceDiagram],
    truth: &[PersistenceDiagram],
    params: &ImageParams,
) -> Result<EvalReport> {
    if pred.len() != truth.len() {
        return Err(invalid(format!(
            "{} predicted diagrams for {} targets",
            pred.len(),
            truth.len()
        )));
    }
    if pred.is_empty() {
        return Err(invalid("nothing to evaluate"));
    }
    let samples = pred
        .par_iter()
        .zip(truth)
        .map(|(p, t)| {
            Ok(SampleMetrics {
                w2: wasserstein2(p, t),
                bottleneck: bottleneck(p, t),
                pie: pie(
                    &persistence_image(p, params)?,
                    &persistence_image(t, params)?,
                )?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let n = samples.len() as f64;
    Ok(EvalReport {
        mean_w2: samples.iter().map(|s| s.w2).sum::<f64>() / n,
        mean_bottleneck: samples.iter().map(|s| s.bottleneck).sum::<f64>() / n,
        mean_pie: samples.iter().map(|s| s.pie).sum::<f64>() / n,
        samples,
    })
}
