//! Imbalanced binary classification toolkit built around a two-month-ahead
//! telecom churn experiment.
//!
//! The crate is organized by capability:
//!
//! - [`dataset`]: customer-month schema, CSV ingestion, cleaning, feature
//!   encoding and the `T -> T+2` label join.
//! - [`sampler`]: exact k-nearest-neighbor search, SMOTE, Borderline-SMOTE,
//!   Tomek links and random under/over-sampling.
//! - [`forest`]: Gini decision trees, random forests and the cost-sensitive
//!   variant with class-weighted impurity and weighted voting.
//! - [`baselines`]: logistic regression and a linear SVM.
//! - [`metrics`]: confusion matrix, precision/recall/TNR/F-measure/G-mean and
//!   phase timings.
//! - [`pipeline`]: synthetic data generator, experiment runner, suites and
//!   report emission.
//!
//! Runnable walkthroughs for each capability live in the crate's `examples/`
//! directory.

pub mod baselines;
pub mod dataset;
pub mod error;
pub mod forest;
pub mod matrix;
pub mod metrics;
pub mod pipeline;
pub mod rng;
pub mod sampler;

pub use error::{Error, Result};
pub use matrix::Matrix;
