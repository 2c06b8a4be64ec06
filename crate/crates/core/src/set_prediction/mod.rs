//! Set-prediction objective for persistence diagrams: bipartite matching of
//! predicted pairs to target pairs, the reconstruction, existence and
//! diagonal losses, and their analytic gradients.

mod fit;
mod gradients;
mod losses;

pub use fit::{direct_fit, FitConfig, FitTrace};
pub use gradients::{
    finite_difference_check, gradients_with_assignment, loss_gradients, Gradients,
};
pub use losses::{
    assign, loss_diag, loss_exist, loss_recon, loss_with_assignment, match_cost, total_loss,
    LossBreakdown,
};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::persistence::{PersistenceDiagram, PersistencePair};

/// Default number of decoder queries.
pub const DEFAULT_QUERIES: usize = 250;

pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + eˣ)` without overflow.
pub fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

/// `ln σ(x)`.
pub fn log_sigmoid(x: f64) -> f64 {
    -softplus(-x)
}

/// Candidate pairs with existence logits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionSet {
    pub pairs: Vec<PersistencePair>,
    pub logits: Vec<f64>,
}

impl PredictionSet {
    pub fn new(pairs: Vec<PersistencePair>, logits: Vec<f64>) -> Result<Self> {
        if pairs.len() != logits.len() {
            return Err(invalid(format!(
                "{} pairs but {} logits",
                pairs.len(),
                logits.len()
            )));
        }
        let finite = pairs
            .iter()
            .all(|p| p.birth.is_finite() && p.death.is_finite())
            && logits.iter().all(|l| l.is_finite());
        if !finite {
            return Err(invalid("prediction set contains non-finite values"));
        }
        Ok(Self { pairs, logits })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn existence(&self) -> Vec<f64> {
        self.logits.iter().map(|&l| sigmoid(l)).collect()
    }

    /// Every predicted pair, regardless of existence.
    pub fn to_diagram(&self, dimension: usize) -> PersistenceDiagram {
        PersistenceDiagram::new(dimension, self.pairs.clone())
    }

    /// Pairs whose existence probability is at least `threshold`.
    pub fn thresholded(&self, dimension: usize, threshold: f64) -> PersistenceDiagram {
        let pairs = self
            .pairs
            .iter()
            .zip(&self.logits)
            .filter(|(_, &l)| sigmoid(l) >= threshold)
            .map(|(p, _)| *p)
            .collect();
        PersistenceDiagram::new(dimension, pairs)
    }

    /// CSV with header `birth,death,logit`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(PREDICTION_CSV_HEADER);
        out.push('\n');
        for (p, l) in self.pairs.iter().zip(&self.logits) {
            out.push_str(&format!("{:?},{:?},{:?}\n", p.birth, p.death, l));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        if lines.next().map(str::trim) != Some(PREDICTION_CSV_HEADER) {
            return Err(Error::Format(format!(
                "expected header {PREDICTION_CSV_HEADER:?}"
            )));
        }
        let (mut pairs, mut logits) = (Vec::new(), Vec::new());
        for (i, line) in lines.enumerate() {
            let row: Vec<f64> = line
                .split(',')
                .map(|f| f.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Format(format!("row {}: cannot parse {line:?}", i + 2)))?;
            let [b, d, l] = row[..] else {
                return Err(Error::Format(format!("row {}: expected 3 fields", i + 2)));
            };
            pairs.push(PersistencePair::new(b, d));
            logits.push(l);
        }
        Self::new(pairs, logits)
    }
}

pub const PREDICTION_CSV_HEADER: &str = "birth,death,logit";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossWeights {
    pub mu_recon: f64,
    pub mu_exist: f64,
    pub mu_diag: f64,
    pub lambda_reg: f64,
    pub lambda_exist: f64,
}

impl Default for LossWeights {
    fn default() -> Self {
        Self {
            mu_recon: 1.0,
            mu_exist: 0.1,
            mu_diag: 0.1,
            lambda_reg: 1.0,
            lambda_exist: 0.1,
        }
    }
}

impl LossWeights {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.mu_recon,
            self.mu_exist,
            self.mu_diag,
            self.lambda_reg,
            self.lambda_exist,
        ];
        if all.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(invalid(format!(
                "loss weights must be finite and non-negative: {self:?}"
            )));
        }
        Ok(())
    }
}
