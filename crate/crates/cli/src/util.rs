use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;
use topofiltr::geometry::io::{
    read_cloud_csv, read_obj, read_off, read_pcf, write_cloud_csv, write_pcf,
};
use topofiltr::geometry::{PointCloud, TriangleMesh};
use topofiltr::persistence::{io as pd_io, PersistenceDiagram};

/// Side-car written next to every output: the command, its parameters and seed.
#[derive(Debug, Serialize)]
pub struct RunRecord<'a, C: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub seed: Option<u64>,
    pub config: C,
}

pub fn record<C: Serialize>(command: &str, seed: Option<u64>, config: C) -> RunRecord<'_, C> {
    RunRecord {
        tool: "topofiltr",
        version: env!("CARGO_PKG_VERSION"),
        command,
        seed,
        config,
    }
}

/// `<file>.run.json` for files, `<dir>/run.json` for directories.
pub fn sidecar_path(output: &Path) -> PathBuf {
    if output.is_dir() {
        output.join("run.json")
    } else {
        let mut name = output.as_os_str().to_owned();
        name.push(".run.json");
        PathBuf::from(name)
    }
}

pub fn write_sidecar<C: Serialize>(output: &Path, record: &RunRecord<'_, C>) -> Result<()> {
    write_json(&sidecar_path(output), record)
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut w =
        BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn extension(path: &Path) -> String {
    path.extension()
        .and_then(|e| e.to_str())
        .unwrap_or("")
        .to_ascii_lowercase()
}

pub fn read_cloud(path: &Path) -> Result<PointCloud> {
    let file =
        BufReader::new(File::open(path).with_context(|| format!("opening {}", path.display()))?);
    let cloud = match extension(path).as_str() {
        "pcf" => read_pcf(file)?,
        "csv" => read_cloud_csv(file)?,
        other => bail!("unsupported cloud format {other:?} (pcf or csv)"),
    };
    Ok(cloud)
}

pub fn write_cloud(path: &Path, cloud: &PointCloud) -> Result<()> {
    let mut w =
        BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
    match extension(path).as_str() {
        "pcf" => write_pcf(cloud, &mut w)?,
        "csv" => write_cloud_csv(cloud, &mut w)?,
        other => bail!("unsupported cloud format {other:?} (pcf or csv)"),
    }
    w.flush()?;
    Ok(())
}

pub fn read_mesh(path: &Path) -> Result<TriangleMesh> {
    let file =
        BufReader::new(File::open(path).with_context(|| format!("opening {}", path.display()))?);
    let mesh = match extension(path).as_str() {
        "off" => read_off(file)?,
        "obj" => read_obj(file)?,
        other => bail!("unsupported mesh format {other:?} (off or obj)"),
    };
    Ok(mesh)
}

pub fn read_diagram(path: &Path, dim: usize) -> Result<PersistenceDiagram> {
    pd_io::read_dimension(path, dim).with_context(|| format!("reading {}", path.display()))
}

/// Files with extension `ext` directly inside `dir`, sorted by name.
pub fn list_files(dir: &Path, ext: &str) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).with_context(|| format!("listing {}", dir.display()))? {
        let path = entry?.path();
        if path.is_file() && extension(&path) == ext {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

pub fn file_name(path: &Path) -> Result<&std::ffi::OsStr> {
    path.file_name()
        .with_context(|| format!("{} has no file name", path.display()))
}

/// `dir/<stem>.<ext>`.
pub fn renamed_into(dir: &Path, input: &Path, ext: &str) -> Result<PathBuf> {
    let stem = input
        .file_stem()
        .with_context(|| format!("{} has no file name", input.display()))?;
    Ok(dir.join(stem).with_extension(ext))
}

/// Parses `0,0.25,1` style lists.
pub fn parse_list<T: std::str::FromStr>(text: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<T>()
                .map_err(|e| anyhow::anyhow!("cannot parse {s:?}: {e}"))
        })
        .collect()
}
