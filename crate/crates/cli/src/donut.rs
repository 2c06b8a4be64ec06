use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Subcommand;
use topofiltr::donut::{generate_dataset, verify_dataset, GenerationConfig};

use crate::util;

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Generate a labelled dataset of meshes and point clouds.
    Gen {
        /// Number of samples; a multiple of the number of beta0 values.
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// JSON generation config; defaults to the paper hyper-parameters.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Points sampled per cloud.
        #[arg(long)]
        points: Option<usize>,
    },
    /// Re-measure every mesh of a dataset against its label.
    Verify { dir: PathBuf },
}

pub fn run(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Gen {
            count,
            seed,
            out,
            config,
            points,
        } => {
            let mut config: GenerationConfig = match config {
                Some(path) => serde_json::from_reader(BufReader::new(
                    File::open(&path).with_context(|| format!("opening {}", path.display()))?,
                ))?,
                None => GenerationConfig::default(),
            };
            config.seed = seed;
            if let Some(p) = points {
                config.cloud_points = p;
            }
            let dataset = generate_dataset(&config, count, Some(&out))?;
            util::write_sidecar(
                &out,
                &util::record("donut gen", Some(seed), &dataset.manifest.config),
            )?;
            println!(
                "generated {} samples in {}",
                dataset.manifest.samples.len(),
                out.display()
            );
        }
        Cmd::Verify { dir } => {
            let report = verify_dataset(&dir)?;
            println!("{}", serde_json::to_string(&report)?);
            if !report.failures.is_empty() {
                bail!(
                    "{} of {} samples fail verification",
                    report.failures.len(),
                    report.checked
                );
            }
        }
    }
    Ok(())
}
