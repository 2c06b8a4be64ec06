//! Diagram CSV files with header `dim,birth,death`, one finite pair per row.

use std::fs;
use std::path::Path;

use super::{PersistenceDiagram, PersistencePair};
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "dim,birth,death";

pub fn to_csv(diagrams: &[PersistenceDiagram]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for d in diagrams {
        for p in &d.pairs {
            out.push_str(&format!("{},{:?},{:?}\n", d.dimension, p.birth, p.death));
        }
    }
    out
}

/// Parses a diagram CSV; rows are grouped by dimension in ascending order.
pub fn from_csv(text: &str) -> Result<Vec<PersistenceDiagram>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next() {
        Some(h) if h.trim() == CSV_HEADER => {}
        other => {
            return Err(Error::Format(format!(
                "expected header {CSV_HEADER:?}, found {other:?}"
            )))
        }
    }
    let mut by_dim: Vec<PersistenceDiagram> = Vec::new();
    for (i, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let bad = || Error::Format(format!("row {}: cannot parse {line:?}", i + 2));
        if fields.len() != 3 {
            return Err(bad());
        }
        let dim: usize = fields[0].parse().map_err(|_| bad())?;
        let birth: f64 = fields[1].parse().map_err(|_| bad())?;
        let death: f64 = fields[2].parse().map_err(|_| bad())?;
        if !(birth.is_finite() && death.is_finite() && death > birth) {
            return Err(Error::Format(format!(
                "row {}: need finite death > birth",
                i + 2
            )));
        }
        let slot = match by_dim.iter().position(|d| d.dimension == dim) {
            Some(s) => s,
            None => {
                by_dim.push(PersistenceDiagram::new(dim, vec![]));
                by_dim.len() - 1
            }
        };
        by_dim[slot].pairs.push(PersistencePair::new(birth, death));
    }
    by_dim.sort_by_key(|d| d.dimension);
    Ok(by_dim)
}

pub fn write_csv(path: impl AsRef<Path>, diagrams: &[PersistenceDiagram]) -> Result<()> {
    fs::write(path, to_csv(diagrams))?;
    Ok(())
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<PersistenceDiagram>> {
    from_csv(&fs::read_to_string(path)?)
}

/// Reads a single-dimension file; an empty file yields an empty diagram of `dim`.
pub fn read_dimension(path: impl AsRef<Path>, dim: usize) -> Result<PersistenceDiagram> {
    Ok(read_csv(path)?
        .into_iter()
        .find(|d| d.dimension == dim)
        .unwrap_or_else(|| PersistenceDiagram::new(dim, vec![])))
}
