use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeConfig {
    pub classes: usize,
    pub folds: usize,
    pub steps: usize,
    pub learning_rate: f64,
    pub seed: u64,
}

impl ProbeConfig {
    pub fn new(classes: usize) -> Self {
        Self {
            classes,
            folds: 5,
            steps: 500,
            learning_rate: 0.1,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    /// Accuracy of every fold that was trained, in fold order.
    pub fold_accuracies: Vec<f64>,
    pub mean_accuracy: f64,
    pub skipped_folds: Vec<usize>,
}

/// Multinomial logistic regression on standardized features.
#[derive(Debug, Clone)]
pub struct SoftmaxModel {
    pub mean: DVector<f64>,
    pub std: DVector<f64>,
    pub weights: DMatrix<f64>,
    pub bias: DVector<f64>,
}

impl SoftmaxModel {
    fn standardize(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        DMatrix::from_fn(x.nrows(), x.ncols(), |i, j| {
            (x[(i, j)] - self.mean[j]) / self.std[j]
        })
    }

    pub fn logits(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        let mut z = self.standardize(x) * &self.weights;
        for mut row in z.row_iter_mut() {
            row += self.bias.transpose();
        }
        z
    }

    pub fn predict(&self, x: &DMatrix<f64>) -> Vec<usize> {
        self.logits(x)
            .row_iter()
            .map(|r| r.transpose().argmax().0)
            .collect()
    }
}

fn softmax_rows(z: &mut DMatrix<f64>) {
    for mut row in z.row_iter_mut() {
        let max = row.max();
        row.apply(|v| *v = (*v - max).exp());
        let s = row.sum();
        row /= s;
    }
}

/// Full-batch gradient descent on the mean cross-entropy from zero weights.
/// Returns the model and the loss before every step.
pub fn fit_softmax(
    x: &DMatrix<f64>,
    labels: &[usize],
    classes: usize,
    steps: usize,
    lr: f64,
) -> (SoftmaxModel, Vec<f64>) {
    let (n, d) = x.shape();
    let mean = DVector::from_fn(d, |j, _| x.column(j).mean());
    let std = DVector::from_fn(d, |j, _| {
        let s = x.column(j).variance().sqrt();
        if s > 1e-12 {
            s
        } else {
            1.0
        }
    });
    let mut model = SoftmaxModel {
        mean,
        std,
        weights: DMatrix::zeros(d, classes),
        bias: DVector::zeros(classes),
    };
    let xs = model.standardize(x);
    let mut history = Vec::with_capacity(steps);
    for _ in 0..steps {
        let mut p = &xs * &model.weights;
        for mut row in p.row_iter_mut() {
            row += model.bias.transpose();
        }
        softmax_rows(&mut p);
        let loss = -labels
            .iter()
            .enumerate()
            .map(|(i, &y)| p[(i, y)].max(1e-300).ln())
            .sum::<f64>()
            / n as f64;
        history.push(loss);
        for (i, &y) in labels.iter().enumerate() {
            p[(i, y)] -= 1.0;
        }
        p /= n as f64;
        model.weights -= xs.transpose() * &p * lr;
        for c in 0..classes {
            model.bias[c] -= lr * p.column(c).sum();
        }
    }
    (model, history)
}

/// k-fold cross-validated accuracy of a linear softmax probe.
pub fn train_linear_probe(
    features: &DMatrix<f64>,
    labels: &[usize],
    config: &ProbeConfig,
) -> Result<ProbeReport> {
    let n = features.nrows();
    if labels.len() != n {
        return Err(invalid(format!("{} labels for {n} samples", labels.len())));
    }
    if config.folds < 2 {
        return Err(invalid("cross-validation needs at least 2 folds"));
    }
    if config.classes < 2 {
        return Err(invalid("a probe needs at least 2 classes"));
    }
    if let Some(&bad) = labels.iter().find(|&&y| y >= config.classes) {
        return Err(invalid(format!(
            "label {bad} is out of range for {} classes",
            config.classes
        )));
    }
    if n < 5 * config.classes {
        return Err(invalid(format!(
            "{n} samples is too few for {} classes",
            config.classes
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng::stream(config.seed, "probe-folds"));
    let fold_of = |pos: usize| pos % config.folds;

    let results: Vec<Option<f64>> = (0..config.folds)
        .into_par_iter()
        .map(|fold| {
            let (test, train): (Vec<(usize, usize)>, Vec<(usize, usize)>) = order
                .iter()
                .copied()
                .enumerate()
                .partition(|(pos, _)| fold_of(*pos) == fold);
            let test: Vec<usize> = test.into_iter().map(|(_, i)| i).collect();
            let train: Vec<usize> = train.into_iter().map(|(_, i)| i).collect();
            let train_labels: Vec<usize> = train.iter().map(|&i| labels[i]).collect();
            if test.is_empty() || train_labels.iter().all(|&y| y == train_labels[0]) {
                log::warn!("probe fold {fold} has a single training class; skipped");
                return None;
            }
            let x_train = features.select_rows(&train);
            let (model, _) = fit_softmax(
                &x_train,
                &train_labels,
                config.classes,
                config.steps,
                config.learning_rate,
            );
            let predicted = model.predict(&features.select_rows(&test));
            let correct = predicted
                .iter()
                .zip(&test)
                .filter(|(p, &i)| **p == labels[i])
                .count();
            Some(correct as f64 / test.len() as f64)
        })
        .collect();

    let skipped_folds: Vec<usize> = (0..config.folds)
        .filter(|&f| results[f].is_none())
        .collect();
    let fold_accuracies: Vec<f64> = results.into_iter().flatten().collect();
    if fold_accuracies.is_empty() {
        return Err(invalid("every fold was degenerate"));
    }
    let mean_accuracy = fold_accuracies.iter().sum::<f64>() / fold_accuracies.len() as f64;
    Ok(ProbeReport {
        fold_accuracies,
        mean_accuracy,
        skipped_folds,
    })
}
