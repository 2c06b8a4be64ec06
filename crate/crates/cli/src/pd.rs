use std::path::PathBuf;

use anyhow::Result;
use clap::{Subcommand, ValueEnum};
use serde_json::json;
use topofiltr::metrics::{bottleneck, persistence_image, pie, wasserstein2, ImageParams};

use crate::util;

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Metric {
    W2,
    Bottleneck,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Distance between two diagram files.
    Dist {
        #[arg(long, value_enum, default_value_t = Metric::W2)]
        metric: Metric,
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 1)]
        dim: usize,
    },
    /// Persistence image of a diagram as a CSV grid.
    Image {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 50)]
        res: usize,
        #[arg(long, default_value_t = 0.05)]
        sigma: f64,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Persistence image error between a thresholded prediction and the truth.
    Pie {
        pred: PathBuf,
        truth: PathBuf,
        #[arg(long, default_value_t = 50)]
        res: usize,
        #[arg(long, default_value_t = 0.05)]
        sigma: f64,
        #[arg(long, default_value_t = 1)]
        dim: usize,
    },
}

pub fn run(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Dist { metric, a, b, dim } => {
            let (a, b) = (util::read_diagram(&a, dim)?, util::read_diagram(&b, dim)?);
            let d = match metric {
                Metric::W2 => wasserstein2(&a, &b),
                Metric::Bottleneck => bottleneck(&a, &b),
            };
            println!("{d:?}");
        }
        Cmd::Image {
            input,
            res,
            sigma,
            dim,
            out,
        } => {
            let params = ImageParams::new(res, sigma)?;
            let image = persistence_image(&util::read_diagram(&input, dim)?, &params)?;
            util::write_text(&out, &image.to_csv())?;
            util::write_sidecar(
                &out,
                &util::record(
                    "pd image",
                    None,
                    json!({ "input": input, "params": params }),
                ),
            )?;
        }
        Cmd::Pie {
            pred,
            truth,
            res,
            sigma,
            dim,
        } => {
            let params = ImageParams::new(res, sigma)?;
            let p = persistence_image(&util::read_diagram(&pred, dim)?, &params)?;
            let t = persistence_image(&util::read_diagram(&truth, dim)?, &params)?;
            println!("{:?}", pie(&p, &t)?);
        }
    }
    Ok(())
}
