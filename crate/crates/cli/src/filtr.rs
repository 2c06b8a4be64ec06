use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Subcommand;
use serde_json::json;
use topofiltr::decoder::{
    evaluate, predict_diagram, CombineMode, Decoder, DecoderConfig, EncoderFeatures, WeightManifest,
};
use topofiltr::metrics::ImageParams;
use topofiltr::persistence::io as pd_io;
use topofiltr::vectorize::FeatureTensor;

use crate::util;

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Write a randomly initialised weight manifest.
    Init {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// JSON decoder config; defaults to the paper architecture.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Predict a diagram from encoder features.
    Infer {
        /// FTN1 tensor shaped [n, d] or [12, n, d].
        #[arg(long)]
        features: PathBuf,
        /// FTN1 tensor of patch centers shaped [n, 3].
        #[arg(long)]
        centers: PathBuf,
        #[arg(long)]
        weights: PathBuf,
        #[arg(long, default_value = "last")]
        mode: CombineMode,
        /// Existence threshold; ignored with --raw.
        #[arg(long, default_value_t = 0.5)]
        threshold: f64,
        /// Write every query as `birth,death,logit` instead of a thresholded diagram.
        #[arg(long)]
        raw: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// W2, bottleneck and PIE between predicted and true diagrams matched by file name.
    Eval {
        #[arg(long)]
        pred: PathBuf,
        #[arg(long = "true")]
        truth: PathBuf,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long, default_value_t = 50)]
        pie_res: usize,
        #[arg(long, default_value_t = 0.05)]
        pie_sigma: f64,
        /// Per-sample CSV with a final mean row.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

pub fn run(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Init { seed, config, out } => {
            let config: DecoderConfig = match config {
                Some(path) => serde_json::from_reader(BufReader::new(
                    File::open(&path).with_context(|| format!("opening {}", path.display()))?,
                ))?,
                None => DecoderConfig::default(),
            };
            WeightManifest::random(&config, seed)?.write(&out)?;
            util::write_sidecar(&out, &util::record("filtr init", Some(seed), &config))?;
        }
        Cmd::Infer {
            features,
            centers,
            weights,
            mode,
            threshold,
            raw,
            out,
        } => {
            let decoder = Decoder::from_manifest(&WeightManifest::read(&weights)?)?;
            let input = EncoderFeatures::from_tensors(
                &FeatureTensor::read(&features)?,
                &FeatureTensor::read(&centers)?,
            )?;
            if raw {
                util::write_text(&out, &decoder.forward(&input, mode)?.to_csv())?;
            } else {
                let d = predict_diagram(&input, &decoder, mode, Some(threshold))?;
                pd_io::write_csv(&out, &[d])?;
            }
            util::write_sidecar(
                &out,
                &util::record(
                    "filtr infer",
                    None,
                    json!({
                        "features": features,
                        "centers": centers,
                        "weights": weights,
                        "mode": format!("{mode:?}").to_lowercase(),
                        "threshold": if raw { None } else { Some(threshold) },
                    }),
                ),
            )?;
        }
        Cmd::Eval {
            pred,
            truth,
            dim,
            pie_res,
            pie_sigma,
            out,
        } => {
            let params = ImageParams::new(pie_res, pie_sigma)?;
            let files = util::list_files(&pred, "csv")?;
            if files.is_empty() {
                bail!("no diagram CSVs in {}", pred.display());
            }
            let mut p = Vec::with_capacity(files.len());
            let mut t = Vec::with_capacity(files.len());
            for f in &files {
                let twin = truth.join(util::file_name(f)?);
                if !twin.is_file() {
                    bail!("no ground truth for {}", f.display());
                }
                p.push(util::read_diagram(f, dim)?);
                t.push(util::read_diagram(&twin, dim)?);
            }
            let report = evaluate(&p, &t, &params)?;
            println!(
                "{}",
                json!({
                    "samples": report.samples.len(),
                    "w2": report.mean_w2,
                    "bottleneck": report.mean_bottleneck,
                    "pie": report.mean_pie,
                })
            );
            if let Some(path) = out {
                util::write_text(&path, &report.to_csv())?;
                util::write_sidecar(
                    &path,
                    &util::record(
                        "filtr eval",
                        None,
                        json!({ "pred": pred, "true": truth, "dim": dim, "params": params }),
                    ),
                )?;
            }
        }
    }
    Ok(())
}
