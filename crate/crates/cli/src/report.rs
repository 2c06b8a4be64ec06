use std::path::PathBuf;

use anyhow::Result;
use clap::Subcommand;
use serde_json::json;

use crate::probe::{probe, ProbeArgs};
use crate::{align, loss, util};

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Emit plot-ready CSV data.
    #[command(subcommand)]
    Plots(Plot),
}

#[derive(Debug, Subcommand)]
pub enum Plot {
    /// Probe accuracy per encoder block: `block,mean_accuracy,min_fold,max_fold`.
    Probing {
        /// One pooled feature tensor per block; the block index comes from its metadata.
        #[arg(required = true)]
        features: Vec<PathBuf>,
        #[command(flatten)]
        args: ProbeArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// CKA against the mismatched fraction: `alpha,cka`.
    Cka {
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        vectors: PathBuf,
        #[arg(long, default_value = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1")]
        alphas: String,
        /// Draws averaged per alpha.
        #[arg(long, default_value_t = 10)]
        repeats: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Predicted and true pairs in one table: `source,birth,death`.
    Scatter {
        /// Diagram CSV or `birth,death,logit` prediction CSV.
        #[arg(long)]
        pred: PathBuf,
        #[arg(long = "true")]
        truth: PathBuf,
        /// Existence threshold applied to prediction CSVs.
        #[arg(long, default_value_t = 0.5)]
        threshold: f64,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

pub fn run(cmd: Cmd) -> Result<()> {
    let Cmd::Plots(plot) = cmd;
    match plot {
        Plot::Probing {
            features,
            args,
            out,
        } => {
            let mut csv = String::from("block,mean_accuracy,min_fold,max_fold\n");
            for (i, f) in features.iter().enumerate() {
                let block = topofiltr::vectorize::FeatureTensor::read(f)?
                    .meta
                    .block
                    .unwrap_or(i + 1);
                let r = probe(f, &args)?;
                let lo = r
                    .fold_accuracies
                    .iter()
                    .copied()
                    .fold(f64::INFINITY, f64::min);
                let hi = r
                    .fold_accuracies
                    .iter()
                    .copied()
                    .fold(f64::NEG_INFINITY, f64::max);
                csv.push_str(&format!("{block},{:?},{lo:?},{hi:?}\n", r.mean_accuracy));
            }
            util::write_text(&out, &csv)?;
            util::write_sidecar(
                &out,
                &util::record(
                    "report plots probing",
                    Some(args.seed),
                    json!({ "features": features, "labels": args.labels, "folds": args.folds }),
                ),
            )?;
        }
        Plot::Cka {
            features,
            vectors,
            alphas,
            repeats,
            seed,
            out,
        } => {
            let alphas: Vec<f64> = util::parse_list(&alphas)?;
            let csv = align::ablation_csv(&features, &vectors, &alphas, seed, repeats)?;
            util::write_text(&out, &csv)?;
            util::write_sidecar(
                &out,
                &util::record(
                    "report plots cka",
                    Some(seed),
                    json!({ "features": features, "vectors": vectors, "alphas": alphas, "repeats": repeats }),
                ),
            )?;
        }
        Plot::Scatter {
            pred,
            truth,
            threshold,
            dim,
            out,
        } => {
            let p = loss::read_prediction(&pred, f64::MAX, dim)?.thresholded(dim, threshold);
            let t = util::read_diagram(&truth, dim)?;
            let mut csv = String::from("source,birth,death\n");
            for (source, d) in [("pred", &p), ("true", &t)] {
                for pair in &d.pairs {
                    csv.push_str(&format!("{source},{:?},{:?}\n", pair.birth, pair.death));
                }
            }
            util::write_text(&out, &csv)?;
            util::write_sidecar(
                &out,
                &util::record(
                    "report plots scatter",
                    None,
                    json!({ "pred": pred, "true": truth, "threshold": threshold, "dim": dim }),
                ),
            )?;
        }
    }
    Ok(())
}
