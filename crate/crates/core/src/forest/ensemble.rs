//! Bagged forests with class-weighted voting.

use rand::Rng;
use rayon::prelude::*;

use super::gini::ClassWeights;
use super::tree::{grow_on_rows, Tree, TreeConfig};
use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rng::stream_rng;

pub const DEFAULT_TREES: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct ForestConfig {
    pub n_trees: usize,
    pub tree: TreeConfig,
    /// Keep each tree's bootstrap row indices on the model.
    pub keep_in_bag: bool,
}

impl Default for ForestConfig {
    fn default() -> Self {
        Self {
            n_trees: DEFAULT_TREES,
            tree: TreeConfig::default(),
            keep_in_bag: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForestModel {
    pub trees: Vec<Tree>,
    pub n_features: usize,
    pub class_weights: ClassWeights,
    pub features_per_split: usize,
    pub min_samples_split: usize,
    pub max_depth: Option<usize>,
    pub seed: u64,
    /// Bootstrap rows per tree, when requested at training time.
    pub in_bag: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub class: u8,
    /// Class weight times the number of trees voting for the class.
    pub scores: [f64; 2],
    pub votes: [usize; 2],
}

/// Scores each class by `weight * votes`; the higher score wins and a tie
/// goes to class 0. The comparison is made through `w1 / w0` so that
/// rescaling both weights cannot flip it by rounding.
pub fn weighted_vote(votes: [usize; 2], weights: ClassWeights) -> (u8, [f64; 2]) {
    let scores = [
        weights.get(0) * votes[0] as f64,
        weights.get(1) * votes[1] as f64,
    ];
    let ratio = weights.get(1) / weights.get(0);
    (u8::from(votes[1] as f64 * ratio > votes[0] as f64), scores)
}

/// Trains `cfg.n_trees` trees, each on a bootstrap of `n` rows drawn with
/// replacement. Tree `t` draws from its own stream of `seed`, so the model is
/// independent of scheduling.
pub fn train_forest(
    data: &LabeledDataset,
    cfg: &ForestConfig,
    weights: ClassWeights,
    seed: u64,
) -> Result<ForestModel> {
    if cfg.n_trees < 1 {
        return Err(Error::InvalidParameter("n_trees must be at least 1".into()));
    }
    if data.is_empty() {
        return Err(Error::EmptyInput);
    }
    weights.validate()?;
    let d = data.dim();
    if let Some(f) = cfg.tree.features_per_split {
        if f < 1 || f > d {
            return Err(Error::InvalidParameter(format!(
                "features_per_split {f} outside [1, {d}]"
            )));
        }
    }
    let n = data.len();
    let grown: Vec<(Tree, Vec<usize>)> = (0..cfg.n_trees)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream_rng(seed, t as u64);
            let rows: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
            let tree = grow_on_rows(&data.features, &data.labels, &rows, weights, &cfg.tree, &mut rng);
            (tree, rows)
        })
        .collect();
    let (trees, bags): (Vec<_>, Vec<_>) = grown.into_iter().unzip();
    Ok(ForestModel {
        trees,
        n_features: d,
        class_weights: weights,
        features_per_split: cfg.tree.resolved_features(d),
        min_samples_split: cfg.tree.min_samples_split,
        max_depth: cfg.tree.max_depth,
        seed,
        in_bag: cfg.keep_in_bag.then_some(bags),
    })
}

impl ForestModel {
    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }

    pub fn predict(&self, x: &[f64]) -> Result<Prediction> {
        if x.len() != self.n_features {
            return Err(Error::DimensionMismatch {
                expected: self.n_features,
                got: x.len(),
            });
        }
        let mut votes = [0usize; 2];
        for t in &self.trees {
            votes[usize::from(t.vote(x))] += 1;
        }
        let (class, scores) = weighted_vote(votes, self.class_weights);
        Ok(Prediction {
            class,
            scores,
            votes,
        })
    }

    pub fn predict_batch(&self, x: &Matrix) -> Result<Vec<u8>> {
        if x.rows() > 0 && x.cols() != self.n_features {
            return Err(Error::DimensionMismatch {
                expected: self.n_features,
                got: x.cols(),
            });
        }
        (0..x.rows())
            .into_par_iter()
            .map(|i| self.predict(x.row(i)).map(|p| p.class))
            .collect()
    }
}

/// Free-function form of [`ForestModel::predict`].
pub fn predict(model: &ForestModel, x: &[f64]) -> Result<Prediction> {
    model.predict(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::tree::TreeNode;

    fn stub_forest(votes_for_one: usize, total: usize, weights: ClassWeights) -> ForestModel {
        let leaf = |c: u8| Tree {
            nodes: vec![TreeNode::Leaf {
                counts: if c == 1 { [0.0, 1.0] } else { [1.0, 0.0] },
            }],
        };
        ForestModel {
            trees: (0..total).map(|i| leaf(u8::from(i < votes_for_one))).collect(),
            n_features: 1,
            class_weights: weights,
            features_per_split: 1,
            min_samples_split: 2,
            max_depth: None,
            seed: 0,
            in_bag: None,
        }
    }

    #[test]
    fn unanimous_vote() {
        let p = stub_forest(100, 100, ClassWeights::UNIFORM).predict(&[0.0]).unwrap();
        assert_eq!(p.class, 1);
        assert_eq!(p.scores, [0.0, 100.0]);
    }

    #[test]
    fn minority_weight_overturns_vote() {
        // 40 trees for the minority (label 1), 60 for the majority
        let p = stub_forest(40, 100, ClassWeights([1.0, 10.0])).predict(&[0.0]).unwrap();
        assert_eq!(p.scores, [60.0, 400.0]);
        assert_eq!(p.class, 1);
    }

    #[test]
    fn score_tie_goes_to_class_zero() {
        let p = stub_forest(50, 100, ClassWeights::UNIFORM).predict(&[0.0]).unwrap();
        assert_eq!(p.class, 0);
    }

    #[test]
    fn dimension_mismatch() {
        let f = stub_forest(1, 1, ClassWeights::UNIFORM);
        assert!(matches!(
            f.predict(&[0.0, 1.0]),
            Err(Error::DimensionMismatch { expected: 1, got: 2 })
        ));
    }

    #[test]
    fn zero_trees_rejected() {
        let data = LabeledDataset::from_rows(&[[0.0], [1.0]], vec![0, 1]).unwrap();
        let cfg = ForestConfig {
            n_trees: 0,
            ..Default::default()
        };
        assert!(train_forest(&data, &cfg, ClassWeights::UNIFORM, 0).is_err());
    }

    #[test]
    fn default_is_one_hundred_trees() {
        assert_eq!(ForestConfig::default().n_trees, 100);
    }
}
