use std::path::{Path, PathBuf};

use anyhow::{bail, Result};
use clap::{Subcommand, ValueEnum};
use serde_json::json;
use topofiltr::persistence::PersistenceDiagram;
use topofiltr::vectorize::{
    atol_like_vectorize, fit_quantization_centers, linear_cka, permutation_ablation,
    rows_to_matrix, topk_vectorize, FeatureMeta, FeatureTensor,
};

use crate::util;

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Method {
    Topk,
    Atol,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Linear CKA between encoder features and diagram vectors.
    Cka {
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        vectors: PathBuf,
    },
    /// CKA after cyclically mismatching a fraction of the feature rows.
    Ablate {
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        vectors: PathBuf,
        /// Mismatched fractions, comma separated.
        #[arg(long, default_value = "0.5")]
        alpha: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        repeats: usize,
        /// CSV `alpha,cka`; printed when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fixed-length vectors from a directory of diagram CSVs (sorted by name).
    Vectorize {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Topk)]
        method: Method,
        /// Pairs kept by top-k.
        #[arg(long, default_value_t = 128)]
        k: usize,
        /// Quantization centers of the ATOL-like method.
        #[arg(long, default_value_t = 16)]
        centers: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

pub fn ablation_csv(
    features: &Path,
    vectors: &Path,
    alphas: &[f64],
    seed: u64,
    repeats: usize,
) -> Result<String> {
    let a = FeatureTensor::read(features)?.to_matrix();
    let b = FeatureTensor::read(vectors)?.to_matrix();
    let mut csv = String::from("alpha,cka\n");
    for &alpha in alphas {
        let c = permutation_ablation(&a, &b, alpha, seed, repeats)?;
        csv.push_str(&format!("{alpha:?},{c:?}\n"));
    }
    Ok(csv)
}

pub fn run(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Cka { features, vectors } => {
            let a = FeatureTensor::read(&features)?.to_matrix();
            let b = FeatureTensor::read(&vectors)?.to_matrix();
            println!("{:?}", linear_cka(&a, &b)?);
        }
        Cmd::Ablate {
            features,
            vectors,
            alpha,
            seed,
            repeats,
            out,
        } => {
            let alphas: Vec<f64> = util::parse_list(&alpha)?;
            let csv = ablation_csv(&features, &vectors, &alphas, seed, repeats)?;
            match out {
                Some(path) => {
                    util::write_text(&path, &csv)?;
                    util::write_sidecar(
                        &path,
                        &util::record(
                            "align ablate",
                            Some(seed),
                            json!({ "features": features, "vectors": vectors, "alphas": alphas, "repeats": repeats }),
                        ),
                    )?;
                }
                None => print!("{csv}"),
            }
        }
        Cmd::Vectorize {
            input,
            method,
            k,
            centers,
            seed,
            dim,
            out,
        } => {
            let files = util::list_files(&input, "csv")?;
            if files.is_empty() {
                bail!("no diagram CSVs in {}", input.display());
            }
            let diagrams = files
                .iter()
                .map(|f| util::read_diagram(f, dim))
                .collect::<Result<Vec<PersistenceDiagram>>>()?;
            let (rows, encoder): (Vec<Vec<f64>>, String) = match method {
                Method::Topk => {
                    if k == 0 {
                        bail!("k must be positive");
                    }
                    (
                        diagrams.iter().map(|d| topk_vectorize(d, k)).collect(),
                        format!("topk-{k}"),
                    )
                }
                Method::Atol => {
                    let q = fit_quantization_centers(&diagrams, centers, seed)?;
                    (
                        diagrams
                            .iter()
                            .map(|d| atol_like_vectorize(d, &q))
                            .collect(),
                        format!("atol-{centers}"),
                    )
                }
            };
            let meta = FeatureMeta {
                encoder,
                ..FeatureMeta::default()
            };
            FeatureTensor::from_matrix(&rows_to_matrix(&rows)?, meta)?.write(&out)?;
            util::write_sidecar(
                &out,
                &util::record(
                    "align vectorize",
                    Some(seed),
                    json!({ "input": input, "method": format!("{method:?}").to_lowercase(), "k": k, "centers": centers, "dim": dim }),
                ),
            )?;
        }
    }
    Ok(())
}
