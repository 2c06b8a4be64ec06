use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Subcommand;
use rand::Rng;
use serde_json::json;
use topofiltr::persistence::{io as pd_io, PersistenceDiagram, PersistencePair};
use topofiltr::rng;
use topofiltr::set_prediction::{
    finite_difference_check, total_loss, LossWeights, PredictionSet, PREDICTION_CSV_HEADER,
};

use crate::util;

#[derive(Debug, Clone, clap::Args)]
pub struct Inputs {
    /// Prediction CSV (`birth,death,logit`) or a diagram CSV.
    #[arg(long)]
    pred: Option<PathBuf>,
    #[arg(long)]
    target: Option<PathBuf>,
    /// Logit given to every pair of a diagram CSV prediction.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    logit: f64,
    #[arg(long, default_value_t = 1)]
    dim: usize,
    /// `default` or a JSON file with mu_recon, mu_exist, mu_diag, lambda_reg, lambda_exist.
    #[arg(long, default_value = "default")]
    weights: String,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Loss components at the optimal assignment, as JSON.
    Eval {
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Analytic gradients against central differences.
    Gradcheck {
        #[command(flatten)]
        inputs: Inputs,
        /// Random instances checked when no --pred/--target are given.
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-5)]
        h: f64,
        /// Largest acceptable relative error.
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
    },
}

fn weights(spec: &str) -> Result<LossWeights> {
    let w = if spec == "default" {
        LossWeights::default()
    } else {
        serde_json::from_str(
            &std::fs::read_to_string(spec).with_context(|| format!("reading {spec}"))?,
        )?
    };
    w.validate()?;
    Ok(w)
}

pub fn read_prediction(path: &Path, logit: f64, dim: usize) -> Result<PredictionSet> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if text.lines().next().map(str::trim) == Some(PREDICTION_CSV_HEADER) {
        return Ok(PredictionSet::from_csv(&text)?);
    }
    let d = pd_io::from_csv(&text)?
        .into_iter()
        .find(|d| d.dimension == dim)
        .unwrap_or_else(|| PersistenceDiagram::new(dim, vec![]));
    let n = d.len();
    Ok(PredictionSet::new(d.pairs, vec![logit; n])?)
}

fn pair_of_files(inputs: &Inputs) -> Result<Option<(PredictionSet, PersistenceDiagram)>> {
    match (&inputs.pred, &inputs.target) {
        (Some(p), Some(t)) => Ok(Some((
            read_prediction(p, inputs.logit, inputs.dim)?,
            util::read_diagram(t, inputs.dim)?,
        ))),
        (None, None) => Ok(None),
        _ => bail!("--pred and --target go together"),
    }
}

fn random_instance(seed: u64, trial: usize) -> Result<(PredictionSet, PersistenceDiagram)> {
    let mut r = rng::indexed_stream(seed, "gradcheck", trial as u64);
    let m = r.random_range(1..=8);
    let n = m + r.random_range(0..=8);
    let pair = |r: &mut rng::StreamRng| {
        let b: f64 = r.random_range(0.0..1.0);
        PersistencePair::new(b, b + r.random_range(0.01..0.5))
    };
    let target = (0..m).map(|_| pair(&mut r)).collect();
    let pairs = (0..n).map(|_| pair(&mut r)).collect();
    let logits = (0..n).map(|_| r.random_range(-3.0..3.0)).collect();
    Ok((
        PredictionSet::new(pairs, logits)?,
        PersistenceDiagram::new(1, target),
    ))
}

pub fn run(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Eval { inputs } => {
            let Some((pred, target)) = pair_of_files(&inputs)? else {
                bail!("loss eval needs --pred and --target");
            };
            let b = total_loss(&pred, &target, &weights(&inputs.weights)?)?;
            println!("{}", serde_json::to_string(&b)?);
        }
        Cmd::Gradcheck {
            inputs,
            trials,
            seed,
            h,
            tol,
        } => {
            let w = weights(&inputs.weights)?;
            let instances = match pair_of_files(&inputs)? {
                Some(one) => vec![one],
                None => (0..trials)
                    .map(|t| random_instance(seed, t))
                    .collect::<Result<_>>()?,
            };
            let mut worst: f64 = 0.0;
            for (pred, target) in &instances {
                worst = worst.max(finite_difference_check(pred, target, &w, h)?);
            }
            println!(
                "{}",
                json!({ "instances": instances.len(), "max_relative_error": worst, "h": h })
            );
            if !(worst < tol) {
                bail!("gradient check failed: relative error {worst:e} exceeds {tol:e}");
            }
        }
    }
    Ok(())
}
