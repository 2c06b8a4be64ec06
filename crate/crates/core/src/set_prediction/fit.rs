use rand::Rng;
use serde::Serialize;

use super::gradients::loss_gradients;
use super::{LossWeights, PredictionSet};
use crate::error::{invalid, Result};
use crate::metrics::wasserstein2;
use crate::persistence::{PersistenceDiagram, PersistencePair};
use crate::rng;

/// Plain gradient descent on free pairs and logits against a fixed target.
#[derive(Debug, Clone, Serialize)]
pub struct FitConfig {
    pub queries: usize,
    pub steps: usize,
    pub learning_rate: f64,
    pub weights: LossWeights,
    pub seed: u64,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            queries: 32,
            steps: 5000,
            learning_rate: 1.0,
            weights: LossWeights::default(),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FitTrace {
    pub losses: Vec<f64>,
    /// W2 between all predicted pairs and the target, after each step.
    pub w2_all: Vec<f64>,
    /// W2 between the pairs with existence above 0.5 and the target, after each step.
    pub w2_thresholded: Vec<f64>,
    pub prediction: PredictionSet,
}

fn initial_prediction(n: usize, seed: u64) -> PredictionSet {
    let mut r = rng::stream(seed, "direct-fit-init");
    let pairs = (0..n)
        .map(|_| {
            let b: f64 = r.random_range(0.0..1.0);
            PersistencePair::new(b, b + r.random_range(0.01..0.5))
        })
        .collect();
    PredictionSet::new(pairs, vec![0.0; n]).expect("finite initial prediction")
}

pub fn direct_fit(target: &PersistenceDiagram, config: &FitConfig) -> Result<FitTrace> {
    if !(config.learning_rate > 0.0) {
        return Err(invalid("learning rate must be positive"));
    }
    let mut pred = initial_prediction(config.queries, config.seed);
    let dim = target.dimension;
    let mut trace = FitTrace {
        losses: Vec::with_capacity(config.steps),
        w2_all: Vec::with_capacity(config.steps),
        w2_thresholded: Vec::with_capacity(config.steps),
        prediction: pred.clone(),
    };
    for _ in 0..config.steps {
        let (loss, g) = loss_gradients(&pred, target, &config.weights)?;
        trace.losses.push(loss.total);
        let lr = config.learning_rate;
        for i in 0..pred.len() {
            pred.pairs[i].birth -= lr * g.birth[i];
            pred.pairs[i].death -= lr * g.death[i];
            pred.logits[i] -= lr * g.logits[i];
        }
        trace
            .w2_all
            .push(wasserstein2(&pred.to_diagram(dim), target));
        trace
            .w2_thresholded
            .push(wasserstein2(&pred.thresholded(dim, 0.5), target));
    }
    trace.prediction = pred;
    Ok(trace)
}
