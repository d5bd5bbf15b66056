//! Numeric encoding of customer records.
//!
//! Categorical fields become one-hot columns over a level dictionary frozen on
//! the fitting data; flags stay a single 0/1 column; month fields become signed
//! offsets from the analysis month. Every column is then z-scored with
//! parameters fitted on the training records.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::schema::{ChurnState, CustomerRecord, Field, FieldKind, Value, YearMonth};
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Encoding {
    Numeric,
    Flag,
    OneHot(String),
    MonthOffset,
    /// 1 when an optional field is present.
    Presence,
}

/// Provenance of one feature column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureInfo {
    pub source: Option<Field>,
    pub encoding: Encoding,
    pub standardized: bool,
}

impl FeatureInfo {
    /// A plain numeric column with no schema source (toy and test data).
    pub fn raw(standardized: bool) -> Self {
        Self {
            source: None,
            encoding: Encoding::Numeric,
            standardized,
        }
    }

    pub fn name(&self) -> String {
        let src = self.source.map_or("x", Field::name);
        match &self.encoding {
            Encoding::Numeric | Encoding::Flag => src.to_string(),
            Encoding::OneHot(level) => format!("{src}={level}"),
            Encoding::MonthOffset => format!("{src}_offset"),
            Encoding::Presence => format!("has_{src}"),
        }
    }
}

impl fmt::Display for FeatureInfo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Per-column z-score parameters. A zero deviation maps the column to 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardization {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl Standardization {
    pub fn fit(x: &Matrix) -> Self {
        let (n, d) = (x.rows(), x.cols());
        let mut mean = vec![0.0; d];
        for row in x.iter_rows() {
            for (m, v) in mean.iter_mut().zip(row) {
                *m += v;
            }
        }
        let denom = n.max(1) as f64;
        mean.iter_mut().for_each(|m| *m /= denom);
        let mut var = vec![0.0; d];
        for row in x.iter_rows() {
            for ((s, v), m) in var.iter_mut().zip(row).zip(&mean) {
                *s += (v - m) * (v - m);
            }
        }
        let std = var.into_iter().map(|s| (s / denom).sqrt()).collect();
        Self { mean, std }
    }

    pub fn transform(&self, x: &mut Matrix) {
        for i in 0..x.rows() {
            for ((v, m), s) in x.row_mut(i).iter_mut().zip(&self.mean).zip(&self.std) {
                *v = if *s > 0.0 { (*v - m) / s } else { 0.0 };
            }
        }
    }
}

/// Frozen level dictionaries plus standardization parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureEncoder {
    levels: BTreeMap<Field, Vec<String>>,
    columns: Vec<FeatureInfo>,
    pub standardization: Standardization,
}

/// Output of [`encode_features`]: the standardized matrix and the encoder that
/// produced it.
#[derive(Debug, Clone)]
pub struct EncodedFeatures {
    pub features: Matrix,
    pub encoder: FeatureEncoder,
}

fn feature_fields() -> impl Iterator<Item = Field> {
    Field::ALL
        .iter()
        .copied()
        .filter(|&f| f != Field::ChurnStateEnd)
}

fn column_layout(levels: &BTreeMap<Field, Vec<String>>) -> Vec<FeatureInfo> {
    let col = |source, encoding| FeatureInfo {
        source: Some(source),
        encoding,
        standardized: true,
    };
    let mut cols = Vec::new();
    for f in feature_fields() {
        match f.kind() {
            FieldKind::Quantity | FieldKind::Days => cols.push(col(f, Encoding::Numeric)),
            FieldKind::Flag | FieldKind::State => cols.push(col(f, Encoding::Flag)),
            FieldKind::Category => {
                for level in levels.get(&f).into_iter().flatten() {
                    cols.push(col(f, Encoding::OneHot(level.clone())));
                }
            }
            FieldKind::Month => cols.push(col(f, Encoding::MonthOffset)),
            FieldKind::OptionalMonth => {
                cols.push(col(f, Encoding::MonthOffset));
                cols.push(col(f, Encoding::Presence));
            }
        }
    }
    cols
}

impl FeatureEncoder {
    pub fn columns(&self) -> &[FeatureInfo] {
        &self.columns
    }

    pub fn levels(&self, field: Field) -> &[String] {
        self.levels.get(&field).map_or(&[], Vec::as_slice)
    }

    /// Unstandardized encoding. Missing numeric values become NaN, so callers
    /// must clean first.
    pub fn encode_raw(&self, records: &[CustomerRecord], t: YearMonth) -> Matrix {
        let d = self.columns.len();
        let mut x = Matrix::zeros(records.len(), d);
        for (i, r) in records.iter().enumerate() {
            let row = x.row_mut(i);
            let mut j = 0;
            for f in feature_fields() {
                match f.kind() {
                    FieldKind::Quantity | FieldKind::Days | FieldKind::Flag => {
                        row[j] = r.number(f).unwrap_or(f64::NAN);
                        j += 1;
                    }
                    FieldKind::State => {
                        row[j] = match r.get(f).and_then(Value::as_state) {
                            Some(ChurnState::Churned) => 1.0,
                            Some(ChurnState::Active) => 0.0,
                            None => f64::NAN,
                        };
                        j += 1;
                    }
                    FieldKind::Category => {
                        let levels = self.levels(f);
                        if let Some(Value::Level(l)) = r.get(f) {
                            if let Ok(pos) = levels.binary_search(l) {
                                row[j + pos] = 1.0;
                            }
                        }
                        j += levels.len();
                    }
                    FieldKind::Month => {
                        row[j] = r
                            .get(f)
                            .and_then(Value::as_month)
                            .map_or(f64::NAN, |m| f64::from(m.months_since(t)));
                        j += 1;
                    }
                    FieldKind::OptionalMonth => {
                        if let Some(m) = r.get(f).and_then(Value::as_month) {
                            row[j] = f64::from(m.months_since(t));
                            row[j + 1] = 1.0;
                        }
                        j += 2;
                    }
                }
            }
            debug_assert_eq!(j, d);
        }
        x
    }
}

/// Encodes month-`t` records. With `params` the level dictionaries and
/// standardization are reused; otherwise both are fitted on `records`.
pub fn encode_features(
    records: &[CustomerRecord],
    t: YearMonth,
    params: Option<&FeatureEncoder>,
) -> EncodedFeatures {
    let encoder = match params {
        Some(p) => p.clone(),
        None => {
            let mut levels = BTreeMap::new();
            for f in feature_fields().filter(|f| f.kind() == FieldKind::Category) {
                let set: BTreeSet<String> = records
                    .iter()
                    .filter_map(|r| match r.get(f) {
                        Some(Value::Level(l)) => Some(l.clone()),
                        _ => None,
                    })
                    .collect();
                levels.insert(f, set.into_iter().collect());
            }
            let columns = column_layout(&levels);
            let mut enc = FeatureEncoder {
                levels,
                columns,
                standardization: Standardization {
                    mean: Vec::new(),
                    std: Vec::new(),
                },
            };
            enc.standardization = Standardization::fit(&enc.encode_raw(records, t));
            enc
        }
    };
    let mut features = encoder.encode_raw(records, t);
    encoder.standardization.transform(&mut features);
    EncodedFeatures { features, encoder }
}
