use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{dot, DenseMatrix};
use crate::error::{Error, Result};

/// Hyper-parameters of the hinge-loss subgradient trainer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainingSchedule {
    /// L2 penalty on the weights (the bias is not penalized).
    pub lambda: f64,
    pub epochs: usize,
}

impl Default for TrainingSchedule {
    fn default() -> Self {
        Self {
            lambda: 1e-4,
            epochs: 200,
        }
    }
}

/// A linear decision rule `sign(w·x + b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub bias: f64,
}

impl LinearModel {
    pub fn decision(&self, x: &[f64]) -> f64 {
        dot(&self.weights, x) + self.bias
    }

    pub fn predict(&self, x: &[f64]) -> bool {
        self.decision(x) > 0.0
    }

    /// Fraction of rows of `points` whose prediction matches `labels`.
    pub fn accuracy(&self, points: &DenseMatrix, labels: &[bool]) -> Result<f64> {
        if points.rows() != labels.len() || labels.is_empty() {
            return Err(Error::input(format!(
                "{} points but {} labels",
                points.rows(),
                labels.len()
            )));
        }
        let hits = labels
            .iter()
            .enumerate()
            .filter(|&(i, &l)| self.predict(points.row(i)) == l)
            .count();
        Ok(hits as f64 / labels.len() as f64)
    }
}

/// Trains a linear max-margin classifier by stochastic subgradient descent on
/// the regularized hinge loss.
///
/// The step size is `1 / (λ (t₀ + t))` with `t₀ = 1/λ`, so it starts at 1 and
/// decays harmonically. Each epoch visits the examples in an order drawn from
/// `seed`. The returned model is the average of the iterates of the second
/// half of training, which removes most of the oscillation of the last steps.
pub fn train_linear_classifier(
    points: &DenseMatrix,
    labels: &[bool],
    seed: u64,
    schedule: &TrainingSchedule,
) -> Result<LinearModel> {
    if points.rows() != labels.len() {
        return Err(Error::input(format!(
            "{} training points but {} labels",
            points.rows(),
            labels.len()
        )));
    }
    let positives = labels.iter().filter(|&&l| l).count();
    if positives == 0 || positives == labels.len() {
        return Err(Error::input(
            "training set must contain examples of both classes",
        ));
    }
    if !(schedule.lambda > 0.0) || schedule.epochs == 0 {
        return Err(Error::input("lambda must be > 0 and epochs >= 1"));
    }

    let dim = points.cols();
    let lambda = schedule.lambda;
    let t0 = 1.0 / lambda;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..labels.len()).collect();

    let mut w = vec![0.0; dim];
    let mut b = 0.0;
    let mut avg_w = vec![0.0; dim];
    let mut avg_b = 0.0;
    let mut averaged = 0usize;
    let average_from = schedule.epochs / 2;
    let mut t = 0.0;

    for epoch in 0..schedule.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            let x = points.row(i);
            let y = if labels[i] { 1.0 } else { -1.0 };
            let eta = 1.0 / (lambda * (t0 + t));
            let margin = y * (dot(&w, x) + b);
            let shrink = 1.0 - eta * lambda;
            w.iter_mut().for_each(|v| *v *= shrink);
            if margin < 1.0 {
                for (wj, xj) in w.iter_mut().zip(x) {
                    *wj += eta * y * xj;
                }
                b += eta * y;
            }
            t += 1.0;
            if epoch >= average_from {
                averaged += 1;
                let k = averaged as f64;
                for (a, v) in avg_w.iter_mut().zip(&w) {
                    *a += (v - *a) / k;
                }
                avg_b += (b - avg_b) / k;
            }
        }
    }
    Ok(LinearModel {
        weights: avg_w,
        bias: avg_b,
    })
}
