use serde::Serialize;

use super::{log_sigmoid, sigmoid, LossWeights, PredictionSet};
use crate::assignment::{hungarian, Assignment, CostMatrix};
use crate::error::{Error, Result};
use crate::persistence::PersistenceDiagram;

/// Sum that does not depend on the order of the terms.
fn ordered_sum(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(f64::total_cmp);
    terms.iter().sum()
}

/// Rows are targets, columns are predictions:
/// `λ_reg‖ŷ_i − y_j‖² + λ_exist(1 − σ(l̂_i))`.
pub fn match_cost(
    pred: &PredictionSet,
    target: &PersistenceDiagram,
    w: &LossWeights,
) -> Result<CostMatrix> {
    w.validate()?;
    let (m, n) = (target.len(), pred.len());
    if m > n {
        return Err(Error::CapacityExceeded {
            targets: m,
            predictions: n,
        });
    }
    Ok(CostMatrix::from_fn(m, n, |j, i| {
        let (y, p) = (target.pairs[j], pred.pairs[i]);
        let d2 = (p.birth - y.birth).powi(2) + (p.death - y.death).powi(2);
        w.lambda_reg * d2 + w.lambda_exist * (1.0 - sigmoid(pred.logits[i]))
    }))
}

/// Optimal target → prediction assignment.
pub fn assign(
    pred: &PredictionSet,
    target: &PersistenceDiagram,
    w: &LossWeights,
) -> Result<Assignment> {
    hungarian(&match_cost(pred, target, w)?)
}

/// Mean squared error over matched pairs; 0 for an empty target.
pub fn loss_recon(pred: &PredictionSet, target: &PersistenceDiagram, a: &Assignment) -> f64 {
    let m = target.len();
    if m == 0 {
        return 0.0;
    }
    let terms = a
        .row_to_col
        .iter()
        .zip(&target.pairs)
        .map(|(&i, y)| {
            (pred.pairs[i].birth - y.birth).powi(2) + (pred.pairs[i].death - y.death).powi(2)
        })
        .collect();
    ordered_sum(terms) / m as f64
}

/// Binary cross-entropy with matched predictions labelled 1, the rest 0.
pub fn loss_exist(logits: &[f64], a: &Assignment) -> f64 {
    let n = logits.len();
    if n == 0 {
        return 0.0;
    }
    let matched = a.matched_columns(n);
    let terms = logits
        .iter()
        .zip(&matched)
        .map(|(&l, &is_matched)| {
            if is_matched {
                log_sigmoid(l)
            } else {
                log_sigmoid(-l)
            }
        })
        .collect();
    -ordered_sum(terms) / n as f64
}

/// Mean squared persistence of unmatched predictions; 0 when all are matched.
pub fn loss_diag(pred: &PredictionSet, a: &Assignment) -> f64 {
    let matched = a.matched_columns(pred.len());
    let gaps: Vec<f64> = pred
        .pairs
        .iter()
        .zip(&matched)
        .filter(|(_, &m)| !m)
        .map(|(p, _)| (p.death - p.birth).powi(2))
        .collect();
    if gaps.is_empty() {
        0.0
    } else {
        let k = gaps.len() as f64;
        ordered_sum(gaps) / k
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LossBreakdown {
    pub total: f64,
    pub recon: f64,
    pub exist: f64,
    pub diag: f64,
    /// Prediction index matched to each target pair.
    pub assignment: Vec<usize>,
}

pub fn loss_with_assignment(
    pred: &PredictionSet,
    target: &PersistenceDiagram,
    w: &LossWeights,
    a: &Assignment,
) -> LossBreakdown {
    let recon = loss_recon(pred, target, a);
    let exist = loss_exist(&pred.logits, a);
    let diag = loss_diag(pred, a);
    LossBreakdown {
        total: w.mu_recon * recon + w.mu_exist * exist + w.mu_diag * diag,
        recon,
        exist,
        diag,
        assignment: a.row_to_col.clone(),
    }
}

pub fn total_loss(
    pred: &PredictionSet,
    target: &PersistenceDiagram,
    w: &LossWeights,
) -> Result<LossBreakdown> {
    let a = assign(pred, target, w)?;
    Ok(loss_with_assignment(pred, target, w, &a))
}
