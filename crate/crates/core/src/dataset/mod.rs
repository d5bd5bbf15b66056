//! Customer data: schema, CSV ingestion, cleaning, encoding and windowing.

mod clean;
mod encode;
mod io;
mod schema;
mod window;

pub use clean::{clean, CleaningLog, CleaningStats, FieldLog, Imputation};
pub use encode::{
    encode_features, EncodedFeatures, Encoding, FeatureEncoder, FeatureInfo, Standardization,
};
pub use io::{
    load_csv, load_months, month_file_name, month_file_path, read_records, write_csv,
    write_records,
};
pub use schema::{ChurnState, CustomerRecord, Field, FieldKind, Value, YearMonth};
pub use window::{
    build_window_pair, eligibility_filter, join_window, Preprocessing, RecordsByMonth,
    WindowJoin, WindowPair,
};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Numeric features with binary labels (1 = churn = positive).
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    pub features: Matrix,
    pub labels: Vec<u8>,
    pub feature_names: Vec<FeatureInfo>,
    pub standardization: Option<Standardization>,
}

impl LabeledDataset {
    /// Dataset with anonymous raw columns.
    pub fn new(features: Matrix, labels: Vec<u8>) -> Result<Self> {
        if features.rows() != labels.len() {
            return Err(Error::LengthMismatch {
                left: features.rows(),
                right: labels.len(),
            });
        }
        if let Some(&bad) = labels.iter().find(|&&l| l > 1) {
            return Err(Error::InvalidParameter(format!("label {bad} is not binary")));
        }
        let feature_names = vec![FeatureInfo::raw(false); features.cols()];
        Ok(Self {
            features,
            labels,
            feature_names,
            standardization: None,
        })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R], labels: Vec<u8>) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?, labels)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.features.cols()
    }

    /// Counts of label 0 and label 1.
    pub fn class_counts(&self) -> [usize; 2] {
        let pos = self.labels.iter().filter(|&&l| l == 1).count();
        [self.labels.len() - pos, pos]
    }

    pub fn rows_of_class(&self, label: u8) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.labels[i] == label).collect()
    }

    /// Subset with the given rows in order (duplicates allowed).
    pub fn select(&self, rows: &[usize]) -> Self {
        Self {
            features: self.features.select_rows(rows),
            labels: rows.iter().map(|&i| self.labels[i]).collect(),
            feature_names: self.feature_names.clone(),
            standardization: self.standardization.clone(),
        }
    }

    pub fn check_finite(&self) -> Result<()> {
        match self.features.first_non_finite() {
            Some((row, col)) => Err(Error::NonFinite { row, col }),
            None => Ok(()),
        }
    }
}
