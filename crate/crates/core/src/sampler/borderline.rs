//! Safe / danger / noise partition of the minority class.

use rayon::prelude::*;

use super::knn::knn;
use super::ClassBalance;
use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BorderlineClass {
    /// Fewer than half of the `m` neighbors are majority.
    Safe,
    /// At least half, but not all, of the `m` neighbors are majority.
    Danger,
    /// Every one of the `m` neighbors is majority.
    Noise,
}

impl BorderlineClass {
    /// Classifies a minority example from its majority-neighbor count.
    pub fn from_majority_count(majority_neighbors: usize, m: usize) -> Self {
        if majority_neighbors >= m {
            BorderlineClass::Noise
        } else if 2 * majority_neighbors >= m {
            BorderlineClass::Danger
        } else {
            BorderlineClass::Safe
        }
    }
}

/// Minority rows split by their neighborhood; each list is ascending.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BorderlinePartition {
    pub safe: Vec<usize>,
    pub danger: Vec<usize>,
    pub noise: Vec<usize>,
}

/// Partitions the minority rows by how many of their `m` nearest neighbors,
/// taken over the whole dataset, belong to the majority class.
pub fn borderline_classify(data: &LabeledDataset, m: usize) -> Result<BorderlinePartition> {
    if m < 1 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    let balance = ClassBalance::of(&data.labels);
    if balance.n_minority == 0 {
        return Err(Error::SingleClass);
    }
    let others = data.len() - 1;
    if others < m {
        return Err(Error::TooFewRows {
            needed: m,
            found: others,
        });
    }
    let pool: Vec<usize> = (0..data.len()).collect();
    let minority = data.rows_of_class(balance.minority);
    let classes: Vec<BorderlineClass> = minority
        .par_iter()
        .map(|&i| {
            let nb = knn(&data.features, i, &pool, m)?;
            let maj = nb
                .iter()
                .filter(|&&j| data.labels[j] == balance.majority)
                .count();
            Ok(BorderlineClass::from_majority_count(maj, m))
        })
        .collect::<Result<_>>()?;

    let mut part = BorderlinePartition::default();
    for (&row, class) in minority.iter().zip(classes) {
        match class {
            BorderlineClass::Safe => part.safe.push(row),
            BorderlineClass::Danger => part.danger.push(row),
            BorderlineClass::Noise => part.noise.push(row),
        }
    }
    Ok(part)
}
