use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Result};
use clap::Subcommand;
use rayon::prelude::*;
use serde_json::json;
use topofiltr::persistence::{
    compute_diagrams, io as pd_io, quantile_threshold, rips_filtration, scale_dataset, RipsConfig,
};

use crate::util;

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Vietoris-Rips diagrams of a cloud, or of every .pcf in a directory.
    Compute {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 2.0)]
        max_edge: f64,
        #[arg(long, default_value = "0,1")]
        dims: String,
        #[arg(long, default_value_t = 2048)]
        point_cap: usize,
        /// Diagram CSV, or a directory when the input is one.
        #[arg(long)]
        out: PathBuf,
    },
    /// Keep the most persistent fraction of one dimension.
    Threshold {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 0.10)]
        keep: f64,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Divide every diagram of a directory by the dataset-wide scale.
    Scale {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Input/output pairs: one file, or every `ext` file of a directory.
fn jobs(input: &Path, out: &Path, ext: &str) -> Result<Vec<(PathBuf, PathBuf)>> {
    if input.is_dir() {
        fs::create_dir_all(out)?;
        util::list_files(input, ext)?
            .into_iter()
            .map(|f| {
                let target = util::renamed_into(out, &f, "csv")?;
                Ok((f, target))
            })
            .collect()
    } else {
        Ok(vec![(input.to_path_buf(), out.to_path_buf())])
    }
}

pub fn run(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Compute {
            input,
            max_edge,
            dims,
            point_cap,
            out,
        } => {
            let dims: Vec<usize> = util::parse_list(&dims)?;
            if dims.is_empty() || dims.iter().any(|&d| d > 1) {
                bail!("dimensions must be drawn from 0 and 1");
            }
            let config = RipsConfig {
                max_edge,
                point_cap,
            };
            jobs(&input, &out, "pcf")?
                .par_iter()
                .try_for_each(|(src, dst)| -> Result<()> {
                    let cloud = util::read_cloud(src)?;
                    let (h0, h1) = compute_diagrams(&rips_filtration(&cloud, &config)?);
                    let keep: Vec<_> = [h0, h1]
                        .into_iter()
                        .filter(|d| dims.contains(&d.dimension))
                        .collect();
                    pd_io::write_csv(dst, &keep)?;
                    Ok(())
                })?;
            util::write_sidecar(
                &out,
                &util::record(
                    "ph compute",
                    None,
                    json!({ "input": input, "max_edge": max_edge, "dims": dims, "point_cap": point_cap }),
                ),
            )?;
        }
        Cmd::Threshold {
            input,
            keep,
            dim,
            out,
        } => {
            jobs(&input, &out, "csv")?
                .par_iter()
                .try_for_each(|(src, dst)| -> Result<()> {
                    let d = quantile_threshold(&util::read_diagram(src, dim)?, keep)?;
                    pd_io::write_csv(dst, &[d])?;
                    Ok(())
                })?;
            util::write_sidecar(
                &out,
                &util::record(
                    "ph threshold",
                    None,
                    json!({ "input": input, "keep": keep, "dim": dim }),
                ),
            )?;
        }
        Cmd::Scale { dataset, dim, out } => {
            let files = util::list_files(&dataset, "csv")?;
            let diagrams = files
                .iter()
                .map(|f| util::read_diagram(f, dim))
                .collect::<Result<Vec<_>>>()?;
            let (scaled, s) = scale_dataset(&diagrams)?;
            fs::create_dir_all(&out)?;
            for (f, d) in files.iter().zip(&scaled) {
                pd_io::write_csv(out.join(util::file_name(f)?), std::slice::from_ref(d))?;
            }
            util::write_json(
                &out.join("scale.json"),
                &json!({ "scale": s, "dim": dim, "diagrams": files.len() }),
            )?;
            util::write_sidecar(
                &out,
                &util::record("ph scale", None, json!({ "dataset": dataset, "dim": dim })),
            )?;
            println!("{s:?}");
        }
    }
    Ok(())
}
