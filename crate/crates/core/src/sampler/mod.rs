//! Class rebalancing: exact neighbor search, SMOTE-family over-sampling,
//! Tomek-link cleaning and random under/over-sampling.
//!
//! The minority class is whichever label has fewer rows (label 1 on a tie).
//! Every sampler is a pure function of `(data, cfg)`; randomized steps draw
//! from streams derived from `cfg.seed`.

mod borderline;
mod knn;
mod random;
mod smote;
mod tomek;

use std::fmt;
use std::str::FromStr;

pub use borderline::{borderline_classify, BorderlineClass, BorderlinePartition};
pub use knn::{knn, knn_batch, nearest_to_point};
pub use random::{random_over, random_under, tomek_under};
pub use smote::{borderline_smote, smote, smote_tomek};
pub use tomek::tomek_links;

use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SamplerConfig {
    /// Minority neighbors considered when interpolating.
    pub k_smote: usize,
    /// Neighbors used to flag borderline (danger) examples.
    pub m_borderline: usize,
    /// Desired minority:majority ratio after sampling, in `(0, 1]`.
    pub target_ratio: f64,
    pub seed: u64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            k_smote: 5,
            m_borderline: 5,
            target_ratio: 1.0,
            seed: 0,
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k_smote < 1 {
            return Err(Error::InvalidParameter("k_smote must be at least 1".into()));
        }
        if self.m_borderline < 1 {
            return Err(Error::InvalidParameter(
                "m_borderline must be at least 1".into(),
            ));
        }
        if !(self.target_ratio > 0.0 && self.target_ratio <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "target_ratio {} outside (0, 1]",
                self.target_ratio
            )));
        }
        Ok(())
    }
}

/// Where an output row came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Original(usize),
    /// Interpolated between `seed` and its minority neighbor `neighbor`
    /// (both input row indices).
    Synthetic { seed: usize, neighbor: usize },
    /// Exact copy of input row `source`.
    Replicated { source: usize },
}

impl Origin {
    pub fn tag(self) -> &'static str {
        match self {
            Origin::Original(_) => "original",
            Origin::Synthetic { .. } => "synthetic",
            Origin::Replicated { .. } => "replicated",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplerWarning {
    /// The class ratio already met the target; nothing was added or removed.
    AlreadyBalanced,
    /// Borderline-SMOTE found no danger examples to seed from.
    EmptyDangerSet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResampleOutput {
    pub dataset: LabeledDataset,
    /// One tag per output row.
    pub origin: Vec<Origin>,
    /// Deleted rows, numbered over the input rows followed by any rows the
    /// sampler appended before cleaning. Sorted ascending.
    pub removed: Vec<usize>,
    pub seed: u64,
    pub warning: Option<SamplerWarning>,
}

impl ResampleOutput {
    pub(crate) fn unchanged(data: &LabeledDataset, seed: u64, warning: Option<SamplerWarning>) -> Self {
        Self {
            dataset: data.clone(),
            origin: (0..data.len()).map(Origin::Original).collect(),
            removed: Vec::new(),
            seed,
            warning,
        }
    }

    pub fn added(&self) -> usize {
        self.origin
            .iter()
            .filter(|o| !matches!(o, Origin::Original(_)))
            .count()
    }

    pub fn synthetic_count(&self) -> usize {
        self.origin
            .iter()
            .filter(|o| matches!(o, Origin::Synthetic { .. }))
            .count()
    }

    /// Drops the given output rows (sorted, deduplicated by the caller).
    pub(crate) fn without_rows(self, drop: &[usize]) -> Self {
        let mut keep = Vec::with_capacity(self.dataset.len() - drop.len());
        let mut d = drop.iter().peekable();
        for i in 0..self.dataset.len() {
            if d.peek() == Some(&&i) {
                d.next();
            } else {
                keep.push(i);
            }
        }
        let mut removed = self.removed;
        removed.extend_from_slice(drop);
        removed.sort_unstable();
        removed.dedup();
        Self {
            dataset: self.dataset.select(&keep),
            origin: keep.iter().map(|&i| self.origin[i]).collect(),
            removed,
            seed: self.seed,
            warning: self.warning,
        }
    }
}

/// Minority/majority split of a binary dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassBalance {
    pub minority: u8,
    pub majority: u8,
    pub n_minority: usize,
    pub n_majority: usize,
}

impl ClassBalance {
    pub fn of(labels: &[u8]) -> Self {
        let pos = labels.iter().filter(|&&l| l == 1).count();
        let neg = labels.len() - pos;
        if pos <= neg {
            Self {
                minority: 1,
                majority: 0,
                n_minority: pos,
                n_majority: neg,
            }
        } else {
            Self {
                minority: 0,
                majority: 1,
                n_minority: neg,
                n_majority: pos,
            }
        }
    }

    /// Minority rows that must be added to reach `ratio` (0 if already there).
    pub fn shortfall(&self, ratio: f64) -> usize {
        let target = (ratio * self.n_majority as f64).round() as usize;
        target.saturating_sub(self.n_minority)
    }

    /// Majority rows to keep so that minority:majority equals `ratio`.
    pub fn majority_target(&self, ratio: f64) -> usize {
        (self.n_minority as f64 / ratio).round() as usize
    }
}

/// Sampler selection by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SamplerKind {
    None,
    RandomUnder,
    TomekUnder,
    RandomOver,
    Smote,
    BorderlineSmote,
    SmoteTomek,
}

impl SamplerKind {
    pub const ALL: [SamplerKind; 7] = [
        SamplerKind::None,
        SamplerKind::RandomUnder,
        SamplerKind::TomekUnder,
        SamplerKind::RandomOver,
        SamplerKind::Smote,
        SamplerKind::BorderlineSmote,
        SamplerKind::SmoteTomek,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SamplerKind::None => "none",
            SamplerKind::RandomUnder => "random-under",
            SamplerKind::TomekUnder => "tomek-under",
            SamplerKind::RandomOver => "random-over",
            SamplerKind::Smote => "smote",
            SamplerKind::BorderlineSmote => "borderline-smote",
            SamplerKind::SmoteTomek => "smote-tomek",
        }
    }

    pub fn apply(self, data: &LabeledDataset, cfg: &SamplerConfig) -> Result<ResampleOutput> {
        cfg.validate()?;
        match self {
            SamplerKind::None => Ok(ResampleOutput::unchanged(data, cfg.seed, None)),
            SamplerKind::RandomUnder => random_under(data, cfg),
            SamplerKind::TomekUnder => tomek_under(data),
            SamplerKind::RandomOver => random_over(data, cfg),
            SamplerKind::Smote => smote(data, cfg),
            SamplerKind::BorderlineSmote => borderline_smote(data, cfg),
            SamplerKind::SmoteTomek => smote_tomek(data, cfg),
        }
    }
}

impl fmt::Display for SamplerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SamplerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SamplerKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownName {
                kind: "sampler",
                name: s.to_string(),
            })
    }
}
