use std::path::PathBuf;

use anyhow::Result;
use clap::Subcommand;
use serde_json::json;
use topofiltr::geometry::{normalize_unit_sphere, sample_surface};

use crate::util;

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Area-uniform surface sample, normalised to the unit sphere.
    Sample {
        /// OFF or OBJ mesh.
        #[arg(long)]
        mesh: PathBuf,
        #[arg(long, default_value_t = 1024)]
        points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// PCF1 (.pcf) or CSV (.csv) output.
        #[arg(long)]
        out: PathBuf,
    },
    /// Centre a cloud and scale it into the unit sphere.
    Normalize {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

pub fn run(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Sample {
            mesh,
            points,
            seed,
            out,
        } => {
            let m = util::read_mesh(&mesh)?;
            let cloud = normalize_unit_sphere(&sample_surface(&m, points, seed)?)?;
            util::write_cloud(&out, &cloud)?;
            util::write_sidecar(
                &out,
                &util::record(
                    "cloud sample",
                    Some(seed),
                    json!({ "mesh": mesh, "points": points }),
                ),
            )?;
        }
        Cmd::Normalize { input, out } => {
            let cloud = normalize_unit_sphere(&util::read_cloud(&input)?)?;
            util::write_cloud(&out, &cloud)?;
            util::write_sidecar(
                &out,
                &util::record("cloud normalize", None, json!({ "input": input })),
            )?;
        }
    }
    Ok(())
}
