use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::persistence::PersistenceDiagram;

pub const PERSISTENCE_LINEAR: &str = "persistence-linear";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageParams {
    pub resolution: usize,
    pub sigma: f64,
    pub weighting: String,
}

impl Default for ImageParams {
    fn default() -> Self {
        Self {
            resolution: 50,
            sigma: 0.05,
            weighting: PERSISTENCE_LINEAR.into(),
        }
    }
}

impl ImageParams {
    pub fn new(resolution: usize, sigma: f64) -> Result<Self> {
        let p = Self {
            resolution,
            sigma,
            ..Self::default()
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.resolution < 2 {
            return Err(invalid(format!(
                "image resolution must be at least 2, got {}",
                self.resolution
            )));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(invalid(format!(
                "bandwidth must be positive, got {}",
                self.sigma
            )));
        }
        if self.weighting != PERSISTENCE_LINEAR {
            return Err(invalid(format!("unknown weighting {:?}", self.weighting)));
        }
        Ok(())
    }
}

/// Grid over [0,1]² in (birth, persistence) coordinates. `values` is
/// row-major with rows indexed by persistence and columns by birth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersistenceImage {
    pub params: ImageParams,
    pub values: Vec<f64>,
}

impl PersistenceImage {
    pub fn resolution(&self) -> usize {
        self.params.resolution
    }

    pub fn get(&self, persistence_row: usize, birth_col: usize) -> f64 {
        self.values[persistence_row * self.params.resolution + birth_col]
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// One CSV line per grid row.
    pub fn to_csv(&self) -> String {
        let r = self.params.resolution;
        let mut out = String::new();
        for row in self.values.chunks(r) {
            let line: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn persistence_image(
    diagram: &PersistenceDiagram,
    params: &ImageParams,
) -> Result<PersistenceImage> {
    params.validate()?;
    for p in &diagram.pairs {
        let ok = |c: f64| c.is_finite() && c.abs() <= 1.5;
        if !(ok(p.birth) && ok(p.death)) {
            return Err(invalid(format!(
                "pair ({}, {}) lies outside the scaled range; rescale the diagram first",
                p.birth, p.death
            )));
        }
    }
    let r = params.resolution;
    let h = 1.0 / r as f64;
    let s2 = params.sigma * params.sigma;
    let norm = h * h / (2.0 * PI * s2);
    let mut values = vec![0.0; r * r];
    for p in &diagram.pairs {
        let (b, pers) = (p.birth, p.death - p.birth);
        for row in 0..r {
            let y = (row as f64 + 0.5) * h;
            let gy = (-(y - pers).powi(2) / (2.0 * s2)).exp();
            for col in 0..r {
                let x = (col as f64 + 0.5) * h;
                let gx = (-(x - b).powi(2) / (2.0 * s2)).exp();
                values[row * r + col] += pers * norm * gx * gy;
            }
        }
    }
    Ok(PersistenceImage {
        params: params.clone(),
        values,
    })
}

/// Total squared error between two images built with the same parameters.
pub fn pie(predicted: &PersistenceImage, truth: &PersistenceImage) -> Result<f64> {
    if predicted.params != truth.params {
        return Err(invalid(
            "persistence images were built with different parameters",
        ));
    }
    Ok(predicted
        .values
        .iter()
        .zip(&truth.values)
        .map(|(a, b)| (a - b).powi(2))
        .sum())
}
