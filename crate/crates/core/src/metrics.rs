//! Confusion matrix, imbalance-aware measures and phase timing.
//!
//! Churn is the positive class. Every ratio with a zero denominator is `None`
//! rather than `0` or `NaN`.

use std::time::Instant;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub fp: u64,
    pub fn_: u64,
    pub tn: u64,
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.fn_ + self.tn
    }

    /// The same predictions scored with class 0 as the positive class.
    pub fn swapped(&self) -> Self {
        Self {
            tp: self.tn,
            fp: self.fn_,
            fn_: self.fp,
            tn: self.tp,
        }
    }
}

pub fn confusion(predicted: &[u8], actual: &[u8]) -> Result<ConfusionMatrix> {
    if predicted.len() != actual.len() {
        return Err(Error::LengthMismatch {
            left: predicted.len(),
            right: actual.len(),
        });
    }
    if predicted.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut cm = ConfusionMatrix::default();
    for (&p, &a) in predicted.iter().zip(actual) {
        match (p != 0, a != 0) {
            (true, true) => cm.tp += 1,
            (true, false) => cm.fp += 1,
            (false, true) => cm.fn_ += 1,
            (false, false) => cm.tn += 1,
        }
    }
    Ok(cm)
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MetricSet {
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub tpr: Option<f64>,
    pub tnr: Option<f64>,
    pub f_measure: Option<f64>,
    pub g_mean: Option<f64>,
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

/// Harmonic mean of precision and recall; undefined if either is undefined or
/// both are zero.
pub fn f_measure(precision: Option<f64>, recall: Option<f64>) -> Option<f64> {
    let (p, r) = (precision?, recall?);
    (p + r > 0.0).then(|| 2.0 * p * r / (p + r))
}

pub fn g_mean(recall: Option<f64>, tnr: Option<f64>) -> Option<f64> {
    Some((recall? * tnr?).sqrt())
}

pub fn evaluate(cm: &ConfusionMatrix) -> MetricSet {
    let precision = ratio(cm.tp, cm.tp + cm.fp);
    let recall = ratio(cm.tp, cm.tp + cm.fn_);
    let tnr = ratio(cm.tn, cm.tn + cm.fp);
    MetricSet::from_rates(precision, recall, tnr)
}

impl MetricSet {
    /// Derives F-measure and G-mean from the three base rates.
    pub fn from_rates(precision: Option<f64>, recall: Option<f64>, tnr: Option<f64>) -> Self {
        Self {
            precision,
            recall,
            tpr: recall,
            tnr,
            f_measure: f_measure(precision, recall),
            g_mean: g_mean(recall, tnr),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Phase {
    Sampling,
    Training,
    Total,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Sampling => "sampling",
            Phase::Training => "training",
            Phase::Total => "total",
        }
    }
}

/// Wall-clock seconds per phase. `sampling` is `None` when no sampler ran.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhaseTimings {
    pub sampling: Option<f64>,
    pub training: Option<f64>,
    pub total: Option<f64>,
}

impl PhaseTimings {
    pub fn record(&mut self, phase: Phase, seconds: f64) {
        let slot = match phase {
            Phase::Sampling => &mut self.sampling,
            Phase::Training => &mut self.training,
            Phase::Total => &mut self.total,
        };
        *slot = Some(seconds);
    }

    pub fn get(&self, phase: Phase) -> Option<f64> {
        match phase {
            Phase::Sampling => self.sampling,
            Phase::Training => self.training,
            Phase::Total => self.total,
        }
    }
}

/// Runs `body`, returning its value and elapsed seconds.
pub fn time_phase<T>(body: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = body();
    (out, start.elapsed().as_secs_f64())
}

/// Like [`time_phase`], storing the duration in `timings` under `phase`.
pub fn time_into<T>(timings: &mut PhaseTimings, phase: Phase, body: impl FnOnce() -> T) -> T {
    let (out, secs) = time_phase(body);
    timings.record(phase, secs);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn hand_counted() {
        let cm = confusion(&[1, 1, 0, 0, 1], &[1, 0, 0, 1, 1]).unwrap();
        assert_eq!(cm, ConfusionMatrix { tp: 2, fp: 1, fn_: 1, tn: 1 });
    }

    #[test]
    fn identity_and_inversion() {
        let ones = vec![1u8; 7];
        assert_eq!(confusion(&ones, &ones).unwrap(), ConfusionMatrix { tp: 7, ..Default::default() });
        let a = [1, 0, 1, 0, 0];
        let p: Vec<u8> = a.iter().map(|v| 1 - v).collect();
        let cm = confusion(&p, &a).unwrap();
        assert_eq!((cm.tp, cm.tn), (0, 0));
    }

    #[test]
    fn bad_inputs() {
        assert!(matches!(confusion(&[1], &[1, 0]), Err(Error::LengthMismatch { .. })));
        assert!(matches!(confusion(&[], &[]), Err(Error::EmptyInput)));
    }

    #[test]
    fn perfect_classifier() {
        let m = evaluate(&ConfusionMatrix { tp: 10, fp: 0, fn_: 0, tn: 10 });
        for v in [m.precision, m.recall, m.tpr, m.tnr, m.f_measure, m.g_mean] {
            assert_eq!(v, Some(1.0));
        }
    }

    #[test]
    fn undefined_markers() {
        let m = evaluate(&ConfusionMatrix { tp: 0, fp: 0, fn_: 0, tn: 5 });
        assert_eq!(m.precision, None);
        assert_eq!(m.recall, None);
        assert_eq!(m.f_measure, None);
        assert_eq!(m.g_mean, None);
        assert_eq!(m.tnr, Some(1.0));
        let m = evaluate(&ConfusionMatrix { tp: 0, fp: 3, fn_: 2, tn: 5 });
        assert_eq!(m.precision, Some(0.0));
        assert_eq!(m.recall, Some(0.0));
        assert_eq!(m.f_measure, None);
        assert_eq!(m.g_mean, Some(0.0));
    }

    #[test]
    fn reference_rate_triples() {
        let m = MetricSet::from_rates(Some(0.8383), Some(0.3292), Some(0.9952));
        assert_abs_diff_eq!(m.f_measure.unwrap(), 0.473, epsilon = 1e-3);
        assert_abs_diff_eq!(m.g_mean.unwrap(), 0.572, epsilon = 1e-3);
    }

    #[test]
    fn timing() {
        let ((), s) = time_phase(|| ());
        assert!(s >= 0.0);
        let mut t = PhaseTimings::default();
        let v = time_into(&mut t, Phase::Training, || 3);
        assert_eq!(v, 3);
        assert!(t.training.is_some());
        assert!(t.get(Phase::Sampling).is_none());
    }
}
