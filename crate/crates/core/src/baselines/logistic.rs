//! Unregularized logistic regression by full-batch gradient ascent.

use super::{dot, LinearKind, LinearModel, TrainingSummary};
use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct LogisticConfig {
    pub max_iterations: usize,
    /// Initial step; halved whenever a step would lower the likelihood.
    pub step_size: f64,
    /// Stop once the gradient's infinity norm drops below this.
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for LogisticConfig {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            step_size: 1.0,
            tolerance: 1e-6,
            seed: 0,
        }
    }
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `log(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// Mean binomial log-likelihood of `(w, b)` on `data`.
pub fn log_likelihood(data: &LabeledDataset, w: &[f64], b: f64) -> f64 {
    let n = data.len().max(1) as f64;
    data.features
        .iter_rows()
        .zip(&data.labels)
        .map(|(x, &y)| {
            let z = dot(w, x) + b;
            f64::from(y) * z - softplus(z)
        })
        .sum::<f64>()
        / n
}

/// Gradient of [`log_likelihood`]: `(d/dw, d/db)`.
pub fn log_likelihood_gradient(data: &LabeledDataset, w: &[f64], b: f64) -> (Vec<f64>, f64) {
    let n = data.len().max(1) as f64;
    let mut gw = vec![0.0; w.len()];
    let mut gb = 0.0;
    for (x, &y) in data.features.iter_rows().zip(&data.labels) {
        let r = f64::from(y) - sigmoid(dot(w, x) + b);
        for (g, xi) in gw.iter_mut().zip(x) {
            *g += r * xi;
        }
        gb += r;
    }
    gw.iter_mut().for_each(|g| *g /= n);
    (gw, gb / n)
}

fn inf_norm(gw: &[f64], gb: f64) -> f64 {
    gw.iter().fold(gb.abs(), |m, g| m.max(g.abs()))
}

pub(crate) fn check_trainable(data: &LabeledDataset) -> Result<()> {
    data.check_finite()?;
    let [neg, pos] = data.class_counts();
    if neg == 0 || pos == 0 {
        return Err(Error::SingleClass);
    }
    Ok(())
}

/// Maximizes the mean log-likelihood. The likelihood never decreases between
/// iterations: a step that would lower it is halved until it does not.
pub fn train_logreg(data: &LabeledDataset, cfg: &LogisticConfig) -> Result<LinearModel> {
    check_trainable(data)?;
    let d = data.dim();
    let mut w = vec![0.0; d];
    let mut b = 0.0;
    let mut ll = log_likelihood(data, &w, b);
    let mut step = cfg.step_size;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < cfg.max_iterations {
        let (gw, gb) = log_likelihood_gradient(data, &w, b);
        if inf_norm(&gw, gb) < cfg.tolerance {
            converged = true;
            break;
        }
        iterations += 1;
        let mut accepted = false;
        for _ in 0..60 {
            let cand_w: Vec<f64> = w.iter().zip(&gw).map(|(wi, g)| wi + step * g).collect();
            let cand_b = b + step * gb;
            let cand_ll = log_likelihood(data, &cand_w, cand_b);
            if cand_ll >= ll {
                w = cand_w;
                b = cand_b;
                ll = cand_ll;
                accepted = true;
                break;
            }
            step /= 2.0;
        }
        if !accepted {
            break;
        }
    }
    if !converged {
        let (gw, gb) = log_likelihood_gradient(data, &w, b);
        converged = inf_norm(&gw, gb) < cfg.tolerance;
    }
    Ok(LinearModel {
        kind: LinearKind::Logistic,
        coefficients: w,
        intercept: b,
        c: None,
        training: TrainingSummary {
            iterations,
            converged,
            step_size: step,
            tolerance: cfg.tolerance,
            seed: cfg.seed,
            objective: -ll,
        },
    })
}

/// Class (1 iff `p >= 0.5`) and probability `p = 1 / (1 + exp(-(w.x + b)))`.
pub fn predict_logreg(model: &LinearModel, x: &[f64]) -> Result<(u8, f64)> {
    let p = sigmoid(model.decision_value(x)?);
    Ok((u8::from(p >= 0.5), p))
}
