use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Subcommand, ValueEnum};
use serde_json::json;
use topofiltr::donut::read_manifest;
use topofiltr::vectorize::{train_linear_probe, FeatureTensor, ProbeConfig, ProbeReport};

use crate::util;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Task {
    Genus,
    Beta0,
}

#[derive(Debug, Clone, clap::Args)]
pub struct ProbeArgs {
    /// DONUT dataset directory, or a text file with one integer label per line.
    #[arg(long)]
    pub labels: PathBuf,
    #[arg(long, value_enum)]
    pub task: Task,
    #[arg(long, default_value_t = 5)]
    pub folds: usize,
    #[arg(long, default_value_t = 500)]
    pub steps: usize,
    #[arg(long, default_value_t = 0.1)]
    pub lr: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Cross-validated linear probe; prints the JSON report.
    Train {
        #[arg(long)]
        features: PathBuf,
        #[command(flatten)]
        args: ProbeArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Class indices and class count: β0 is shifted to start at 0; genus is used as is.
pub fn load_labels(path: &Path, task: Task) -> Result<(Vec<usize>, usize)> {
    if path.is_dir() {
        let m = read_manifest(path)?;
        let labels: Vec<usize> = m
            .samples
            .iter()
            .map(|s| match task {
                Task::Beta0 => s.label.beta0 - m.config.beta0_min,
                Task::Genus => s.label.genus_total,
            })
            .collect();
        let classes = match task {
            Task::Beta0 => m.config.beta0_max - m.config.beta0_min + 1,
            Task::Genus => m.config.total_genus_max + 1,
        };
        return Ok((labels, classes));
    }
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let labels = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            l.trim()
                .parse::<usize>()
                .with_context(|| format!("bad label {l:?}"))
        })
        .collect::<Result<Vec<_>>>()?;
    let classes = labels.iter().max().map_or(0, |m| m + 1);
    Ok((labels, classes))
}

pub fn probe(features: &Path, args: &ProbeArgs) -> Result<ProbeReport> {
    let x = FeatureTensor::read(features)?.to_matrix();
    let (labels, classes) = load_labels(&args.labels, args.task)?;
    if labels.len() != x.nrows() {
        bail!("{} labels for {} feature rows", labels.len(), x.nrows());
    }
    let config = ProbeConfig {
        classes,
        folds: args.folds,
        steps: args.steps,
        learning_rate: args.lr,
        seed: args.seed,
    };
    Ok(train_linear_probe(&x, &labels, &config)?)
}

pub fn run(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Train {
            features,
            args,
            out,
        } => {
            let report = probe(&features, &args)?;
            println!("{}", serde_json::to_string(&report)?);
            if let Some(path) = out {
                util::write_json(&path, &report)?;
                util::write_sidecar(
                    &path,
                    &util::record(
                        "probe train",
                        Some(args.seed),
                        json!({ "features": features, "labels": args.labels, "task": format!("{:?}", args.task).to_lowercase(), "folds": args.folds, "steps": args.steps, "lr": args.lr }),
                    ),
                )?;
            }
        }
    }
    Ok(())
}
