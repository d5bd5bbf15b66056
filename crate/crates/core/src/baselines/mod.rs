//! Linear comparison classifiers: logistic regression and a linear SVM.

mod logistic;
mod svm;

use std::fmt;
use std::io::Write;
use std::path::Path;

pub use logistic::{
    log_likelihood, log_likelihood_gradient, predict_logreg, train_logreg, LogisticConfig,
};
pub use svm::{predict_svm, svm_c_grid, svm_objective, train_linear_svm, SvmConfig, DEFAULT_SVM_C};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinearKind {
    Logistic,
    Svm,
}

impl fmt::Display for LinearKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LinearKind::Logistic => "logistic",
            LinearKind::Svm => "svm",
        })
    }
}

/// How a training run ended.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSummary {
    pub iterations: usize,
    pub converged: bool,
    pub step_size: f64,
    pub tolerance: f64,
    pub seed: u64,
    /// Objective at the returned iterate (negative mean log-likelihood for
    /// logistic regression, primal SVM objective otherwise).
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub kind: LinearKind,
    pub coefficients: Vec<f64>,
    pub intercept: f64,
    /// Penalty parameter; SVM only.
    pub c: Option<f64>,
    pub training: TrainingSummary,
}

impl LinearModel {
    pub fn decision_value(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.coefficients.len() {
            return Err(Error::DimensionMismatch {
                expected: self.coefficients.len(),
                got: x.len(),
            });
        }
        Ok(dot(&self.coefficients, x) + self.intercept)
    }

    /// Class 1 iff the decision value is nonnegative (for logistic regression
    /// this is `p >= 0.5`).
    pub fn predict_class(&self, x: &[f64]) -> Result<u8> {
        Ok(u8::from(self.decision_value(x)? >= 0.0))
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "churn-linear 1")?;
        writeln!(w, "kind {}", self.kind)?;
        match self.c {
            Some(c) => writeln!(w, "c {c}")?,
            None => writeln!(w, "c none")?,
        }
        writeln!(w, "intercept {}", self.intercept)?;
        let coef: Vec<String> = self.coefficients.iter().map(f64::to_string).collect();
        writeln!(w, "coefficients {}", coef.join(" "))?;
        let t = &self.training;
        writeln!(
            w,
            "training iterations={} converged={} step={} tol={} seed={}",
            t.iterations, t.converged, t.step_size, t.tolerance, t.seed
        )
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = std::io::BufWriter::new(file);
        self.write_to(&mut w)
            .and_then(|_| w.flush())
            .map_err(|e| Error::io(path, e))
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
