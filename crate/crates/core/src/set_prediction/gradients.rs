use serde::Serialize;

use super::losses::{assign, loss_with_assignment, LossBreakdown};
use super::{sigmoid, LossWeights, PredictionSet};
use crate::assignment::Assignment;
use crate::error::{invalid, Result};
use crate::persistence::PersistenceDiagram;

/// Partial derivatives of the total loss with the assignment held fixed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Gradients {
    pub birth: Vec<f64>,
    pub death: Vec<f64>,
    pub logits: Vec<f64>,
}

impl Gradients {
    pub fn norm(&self) -> f64 {
        self.birth
            .iter()
            .chain(&self.death)
            .chain(&self.logits)
            .map(|g| g * g)
            .sum::<f64>()
            .sqrt()
    }
}

pub fn gradients_with_assignment(
    pred: &PredictionSet,
    target: &PersistenceDiagram,
    w: &LossWeights,
    a: &Assignment,
) -> Gradients {
    let n = pred.len();
    let m = target.len();
    let mut g = Gradients {
        birth: vec![0.0; n],
        death: vec![0.0; n],
        logits: vec![0.0; n],
    };
    for (&i, y) in a.row_to_col.iter().zip(&target.pairs) {
        let scale = 2.0 * w.mu_recon / m as f64;
        g.birth[i] += scale * (pred.pairs[i].birth - y.birth);
        g.death[i] += scale * (pred.pairs[i].death - y.death);
    }
    let matched = a.matched_columns(n);
    let unmatched = matched.iter().filter(|&&m| !m).count();
    for i in 0..n {
        let s = sigmoid(pred.logits[i]);
        let label = if matched[i] { 1.0 } else { 0.0 };
        g.logits[i] = w.mu_exist * (s - label) / n as f64;
        if !matched[i] {
            let gap = pred.pairs[i].death - pred.pairs[i].birth;
            let scale = 2.0 * w.mu_diag * gap / unmatched as f64;
            g.death[i] += scale;
            g.birth[i] -= scale;
        }
    }
    g
}

/// Loss components and gradients at the optimal assignment.
pub fn loss_gradients(
    pred: &PredictionSet,
    target: &PersistenceDiagram,
    w: &LossWeights,
) -> Result<(LossBreakdown, Gradients)> {
    let a = assign(pred, target, w)?;
    Ok((
        loss_with_assignment(pred, target, w, &a),
        gradients_with_assignment(pred, target, w, &a),
    ))
}

/// Largest per-coordinate relative error between the analytic gradient and
/// central differences of the total loss with step `h`.
pub fn finite_difference_check(
    pred: &PredictionSet,
    target: &PersistenceDiagram,
    w: &LossWeights,
    h: f64,
) -> Result<f64> {
    if !(h > 0.0) {
        return Err(invalid("finite-difference step must be positive"));
    }
    let a = assign(pred, target, w)?;
    let analytic = gradients_with_assignment(pred, target, w, &a);
    let total = |p: &PredictionSet| loss_with_assignment(p, target, w, &a).total;
    let mut worst: f64 = 0.0;
    for i in 0..pred.len() {
        for coord in 0..3 {
            let (mut plus, mut minus) = (pred.clone(), pred.clone());
            let exact = match coord {
                0 => {
                    plus.pairs[i].birth += h;
                    minus.pairs[i].birth -= h;
                    analytic.birth[i]
                }
                1 => {
                    plus.pairs[i].death += h;
                    minus.pairs[i].death -= h;
                    analytic.death[i]
                }
                _ => {
                    plus.logits[i] += h;
                    minus.logits[i] -= h;
                    analytic.logits[i]
                }
            };
            let numeric = (total(&plus) - total(&minus)) / (2.0 * h);
            let denom = exact.abs().max(numeric.abs());
            if denom > 0.0 {
                worst = worst.max((exact - numeric).abs() / denom);
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::persistence::PersistencePair;

    #[test]
    fn optimum_has_vanishing_gradient() {
        let t = PersistenceDiagram::from_tuples(1, &[(0.1, 0.6)]);
        let p = PredictionSet::new(
            vec![
                PersistencePair::new(0.1, 0.6),
                PersistencePair::new(0.4, 0.4 + 1e-12),
            ],
            vec![40.0, -40.0],
        )
        .unwrap();
        let (loss, g) = loss_gradients(&p, &t, &LossWeights::default()).unwrap();
        assert!(loss.total < 1e-15);
        assert!(g.norm() < 1e-12);
    }

    #[test]
    fn recon_gradient_is_linear_in_weight() {
        let t = PersistenceDiagram::from_tuples(1, &[(0.1, 0.6)]);
        let p = PredictionSet::new(vec![PersistencePair::new(0.3, 0.5)], vec![0.0]).unwrap();
        let w1 = LossWeights {
            mu_exist: 0.0,
            mu_diag: 0.0,
            ..Default::default()
        };
        let w2 = LossWeights {
            mu_recon: 2.0,
            ..w1
        };
        let (_, g1) = loss_gradients(&p, &t, &w1).unwrap();
        let (_, g2) = loss_gradients(&p, &t, &w2).unwrap();
        assert_eq!(g2.birth[0], 2.0 * g1.birth[0]);
        assert_eq!(g2.death[0], 2.0 * g1.death[0]);
    }
}
