//! Class weights and the (weighted) Gini impurity.

use crate::error::{Error, Result};

/// Per-class weights indexed by label.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassWeights(pub [f64; 2]);

impl ClassWeights {
    pub const UNIFORM: ClassWeights = ClassWeights([1.0, 1.0]);

    pub fn get(&self, label: u8) -> f64 {
        self.0[usize::from(label)]
    }

    pub fn scaled(&self, factor: f64) -> Self {
        ClassWeights([self.0[0] * factor, self.0[1] * factor])
    }

    pub fn validate(&self) -> Result<()> {
        if self.0.iter().all(|w| w.is_finite() && *w > 0.0) {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "class weights must be positive, got {:?}",
                self.0
            )))
        }
    }
}

impl Default for ClassWeights {
    fn default() -> Self {
        Self::UNIFORM
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightMode {
    Uniform,
    /// Minority weight `N_majority / N_minority`, majority weight 1.
    Balanced,
}

pub fn class_weights(labels: &[u8], mode: WeightMode) -> Result<ClassWeights> {
    match mode {
        WeightMode::Uniform => Ok(ClassWeights::UNIFORM),
        WeightMode::Balanced => {
            let pos = labels.iter().filter(|&&l| l == 1).count();
            let neg = labels.len() - pos;
            if pos == 0 || neg == 0 {
                return Err(Error::SingleClass);
            }
            let (n_min, n_maj) = (pos.min(neg) as f64, pos.max(neg) as f64);
            let mut w = [1.0; 2];
            let minority = usize::from(pos <= neg);
            w[minority] = n_maj / n_min;
            Ok(ClassWeights(w))
        }
    }
}

/// `1 - sum((w_c n_c / S)^2)` with `S = sum(w_c n_c)`.
pub fn weighted_gini(counts: &[f64], weights: &[f64]) -> Result<f64> {
    if counts.len() != weights.len() {
        return Err(Error::DimensionMismatch {
            expected: counts.len(),
            got: weights.len(),
        });
    }
    if counts.iter().any(|c| *c < 0.0) {
        return Err(Error::InvalidParameter("negative class count".into()));
    }
    let scaled: Vec<f64> = counts.iter().zip(weights).map(|(n, w)| n * w).collect();
    let total: f64 = scaled.iter().sum();
    if total <= 0.0 {
        return Err(Error::ZeroCounts);
    }
    Ok(1.0 - scaled.iter().map(|s| (s / total).powi(2)).sum::<f64>())
}

/// `S * gini` for two classes, the quantity split search compares.
#[inline]
pub(crate) fn weighted_impurity_mass(s0: f64, s1: f64) -> f64 {
    let s = s0 + s1;
    if s <= 0.0 {
        0.0
    } else {
        s - (s0 * s0 + s1 * s1) / s
    }
}
