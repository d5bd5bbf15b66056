//! Linear soft-margin SVM minimizing `1/2 ||(w, b)||^2 + C * sum(hinge)`.
//!
//! Solved by dual coordinate descent: each epoch visits every example once in
//! a seeded order and optimizes its dual variable in closed form, keeping
//! `w = sum(alpha_i y_i x_i)` up to date. The bias is an extra constant
//! feature and is regularized with `w`. The best primal iterate seen, starting
//! from the zero vector, is returned.

use rand::seq::SliceRandom;

use super::logistic::check_trainable;
use super::{dot, LinearKind, LinearModel, TrainingSummary};
use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};
use crate::rng::stream_rng;

pub const DEFAULT_SVM_C: f64 = 100.0;

/// The nine penalty values `10^-4 ..= 10^4`.
pub fn svm_c_grid() -> [f64; 9] {
    [1e-4, 1e-3, 1e-2, 1e-1, 1e0, 1e1, 1e2, 1e3, 1e4]
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvmConfig {
    pub c: f64,
    /// Maximum passes over the data.
    pub epochs: usize,
    /// Stop once the spread of projected dual gradients in a pass falls below this.
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for SvmConfig {
    fn default() -> Self {
        Self {
            c: DEFAULT_SVM_C,
            epochs: 200,
            tolerance: 1e-3,
            seed: 0,
        }
    }
}

fn signed(label: u8) -> f64 {
    if label == 1 {
        1.0
    } else {
        -1.0
    }
}

/// Primal objective `1/2 (||w||^2 + b^2) + C * sum(max(0, 1 - y (w.x + b)))`.
pub fn svm_objective(data: &LabeledDataset, w: &[f64], b: f64, c: f64) -> f64 {
    let hinge: f64 = data
        .features
        .iter_rows()
        .zip(&data.labels)
        .map(|(x, &y)| (1.0 - signed(y) * (dot(w, x) + b)).max(0.0))
        .sum();
    0.5 * (dot(w, w) + b * b) + c * hinge
}

pub fn train_linear_svm(data: &LabeledDataset, cfg: &SvmConfig) -> Result<LinearModel> {
    check_trainable(data)?;
    if !(cfg.c > 0.0 && cfg.c.is_finite()) {
        return Err(Error::InvalidParameter(format!("C must be positive, got {}", cfg.c)));
    }
    let n = data.len();
    let d = data.dim();
    let x = &data.features;
    let y: Vec<f64> = data.labels.iter().map(|&l| signed(l)).collect();
    // diagonal of the Gram matrix, with the constant bias feature
    let q_diag: Vec<f64> = x.iter_rows().map(|r| dot(r, r) + 1.0).collect();

    let mut alpha = vec![0.0; n];
    let mut w = vec![0.0; d];
    let mut b = 0.0;
    let mut best = (svm_objective(data, &w, b, cfg.c), w.clone(), b);
    let mut order: Vec<usize> = (0..n).collect();
    let mut epochs = 0;
    let mut converged = false;
    for epoch in 0..cfg.epochs {
        epochs = epoch + 1;
        order.shuffle(&mut stream_rng(cfg.seed, epoch as u64));
        let (mut pg_max, mut pg_min) = (f64::NEG_INFINITY, f64::INFINITY);
        for &i in &order {
            let xi = x.row(i);
            let g = y[i] * (dot(&w, xi) + b) - 1.0;
            let pg = if alpha[i] == 0.0 {
                g.min(0.0)
            } else if alpha[i] == cfg.c {
                g.max(0.0)
            } else {
                g
            };
            pg_max = pg_max.max(pg);
            pg_min = pg_min.min(pg);
            if pg != 0.0 {
                let old = alpha[i];
                alpha[i] = (old - g / q_diag[i]).clamp(0.0, cfg.c);
                let step = (alpha[i] - old) * y[i];
                for (wj, xj) in w.iter_mut().zip(xi) {
                    *wj += step * xj;
                }
                b += step;
            }
        }
        let obj = svm_objective(data, &w, b, cfg.c);
        if obj < best.0 {
            best = (obj, w.clone(), b);
        }
        if pg_max - pg_min < cfg.tolerance {
            converged = true;
            break;
        }
    }
    let (objective, w, b) = best;
    Ok(LinearModel {
        kind: LinearKind::Svm,
        coefficients: w,
        intercept: b,
        c: Some(cfg.c),
        training: TrainingSummary {
            iterations: epochs,
            converged,
            step_size: 0.0,
            tolerance: cfg.tolerance,
            seed: cfg.seed,
            objective,
        },
    })
}

/// Class 1 iff `w.x + b >= 0`.
pub fn predict_svm(model: &LinearModel, x: &[f64]) -> Result<u8> {
    model.predict_class(x)
}
