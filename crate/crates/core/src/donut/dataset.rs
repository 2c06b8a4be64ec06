use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::assemble::{generate_sample, SampleFiles, SampleManifest};
use super::labels::sample_labels;
use super::verify::verify_labels;
use super::GenerationConfig;
use crate::error::{invalid, Result};
use crate::geometry::io::{read_off, write_off, write_pcf};
use crate::geometry::{PointCloud, TriangleMesh};

pub const MANIFEST_FILE: &str = "manifest.json";
const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub format_version: u32,
    pub config: GenerationConfig,
    pub samples: Vec<SampleManifest>,
}

/// Generated samples: the manifest plus the normalised point clouds in sample order.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub manifest: DatasetManifest,
    pub clouds: Vec<PointCloud>,
}

/// `count` samples, `count / #β0` per β0 value. With `out`, writes
/// `meshes/NNNNN.off`, `clouds/NNNNN.pcf` and `manifest.json` under it.
pub fn generate_dataset(
    config: &GenerationConfig,
    count: usize,
    out: Option<&Path>,
) -> Result<Dataset> {
    let classes = config.beta0_values().count();
    if count == 0 || !count.is_multiple_of(classes) {
        return Err(invalid(format!(
            "count {count} must be a positive multiple of the {classes} beta0 values"
        )));
    }
    let config = GenerationConfig {
        replicates: count / classes,
        ..config.clone()
    };
    let labels = sample_labels(&config)?;
    if let Some(dir) = out {
        fs::create_dir_all(dir.join("meshes"))?;
        fs::create_dir_all(dir.join("clouds"))?;
    }
    let generated: Vec<(SampleManifest, PointCloud)> = labels
        .par_iter()
        .enumerate()
        .map(|(id, label)| {
            let mut sample = generate_sample(&config, id, label)?;
            if let Some(dir) = out {
                let files = SampleFiles {
                    mesh: format!("meshes/{id:05}.off"),
                    cloud: format!("clouds/{id:05}.pcf"),
                };
                let merged = TriangleMesh::merge(&sample.meshes);
                let mut w = BufWriter::new(File::create(dir.join(&files.mesh))?);
                write_off(&merged, &mut w)?;
                w.flush()?;
                let mut w = BufWriter::new(File::create(dir.join(&files.cloud))?);
                write_pcf(&sample.cloud, &mut w)?;
                w.flush()?;
                sample.manifest.files = Some(files);
            }
            Ok((sample.manifest, sample.cloud))
        })
        .collect::<Result<_>>()?;
    let (samples, clouds): (Vec<_>, Vec<_>) = generated.into_iter().unzip();
    let manifest = DatasetManifest {
        format_version: FORMAT_VERSION,
        config,
        samples,
    };
    if let Some(dir) = out {
        let mut w = BufWriter::new(File::create(dir.join(MANIFEST_FILE))?);
        serde_json::to_writer_pretty(&mut w, &manifest)?;
        w.write_all(b"\n")?;
        w.flush()?;
    }
    Ok(Dataset { manifest, clouds })
}

pub fn read_manifest(dir: &Path) -> Result<DatasetManifest> {
    let manifest: DatasetManifest =
        serde_json::from_reader(BufReader::new(File::open(dir.join(MANIFEST_FILE))?))?;
    if manifest.format_version != FORMAT_VERSION {
        return Err(crate::Error::Format(format!(
            "unsupported manifest version {}",
            manifest.format_version
        )));
    }
    Ok(manifest)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DatasetVerification {
    pub checked: usize,
    pub passed: usize,
    /// Ids of samples whose mesh does not realise the recorded label.
    pub failures: Vec<usize>,
}

/// Re-reads every mesh of a written dataset and checks it against its label.
pub fn verify_dataset(dir: &Path) -> Result<DatasetVerification> {
    let manifest = read_manifest(dir)?;
    let outcomes: Vec<(usize, bool)> = manifest
        .samples
        .par_iter()
        .map(|s| {
            let files = s
                .files
                .as_ref()
                .ok_or_else(|| invalid(format!("sample {} has no mesh file", s.id)))?;
            let mesh = read_off(BufReader::new(File::open(dir.join(&files.mesh))?))?;
            Ok((s.id, verify_labels(&[mesh]).matches(&s.label)))
        })
        .collect::<Result<_>>()?;
    let failures: Vec<usize> = outcomes
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(id, _)| *id)
        .collect();
    Ok(DatasetVerification {
        checked: outcomes.len(),
        passed: outcomes.len() - failures.len(),
        failures,
    })
}
