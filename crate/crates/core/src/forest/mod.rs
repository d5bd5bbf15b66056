//! Random forests with the Gini criterion and optional class weights.

mod ensemble;
mod gini;
mod persist;
mod tree;

pub use ensemble::{
    predict, train_forest, weighted_vote, ForestConfig, ForestModel, Prediction, DEFAULT_TREES,
};
pub use gini::{class_weights, weighted_gini, ClassWeights, WeightMode};
pub use persist::{read_forest, write_forest};
pub use tree::{grow_tree, Tree, TreeConfig, TreeNode};
