//! Null imputation and correction of erroneous values.
//!
//! Numeric nulls take the median of the statistics source, categorical and
//! month nulls take its mode. Negative values in nonnegative fields are clamped
//! to zero and day counts are capped at the length of the month. An absent
//! promotion end date is meaningful and is left alone.

use std::collections::BTreeMap;

use super::schema::{CustomerRecord, Field, FieldKind, Value};
use crate::error::{Error, Result};

/// Fill-in value for one field.
#[derive(Debug, Clone, PartialEq)]
pub enum Imputation {
    Median(f64),
    Mode(Value),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CleaningStats {
    fill: BTreeMap<Field, Imputation>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FieldLog {
    pub imputed: usize,
    pub clamped: usize,
}

/// Per-field counts of imputations and clamps.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CleaningLog {
    pub fields: BTreeMap<Field, FieldLog>,
}

impl CleaningLog {
    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    pub fn total_imputed(&self) -> usize {
        self.fields.values().map(|l| l.imputed).sum()
    }

    pub fn total_clamped(&self) -> usize {
        self.fields.values().map(|l| l.clamped).sum()
    }

    fn entry(&mut self, field: Field) -> &mut FieldLog {
        self.fields.entry(field).or_default()
    }
}

fn imputable(field: Field) -> bool {
    field.kind() != FieldKind::OptionalMonth
}

fn corrected(field: Field, v: f64, days: f64) -> f64 {
    match field.kind() {
        FieldKind::Days => v.clamp(0.0, days),
        FieldKind::Flag => v.clamp(0.0, 1.0),
        _ => v.max(0.0),
    }
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Most frequent value; ties go to the smallest rendered form.
fn mode<'a>(values: impl Iterator<Item = &'a Value>) -> Option<Value> {
    let mut counts: BTreeMap<String, (usize, &Value)> = BTreeMap::new();
    for v in values {
        counts.entry(v.render()).or_insert((0, v)).0 += 1;
    }
    let mut best: Option<(usize, &Value)> = None;
    for (count, v) in counts.values() {
        if best.is_none_or(|(c, _)| *count > c) {
            best = Some((*count, v));
        }
    }
    best.map(|(_, v)| v.clone())
}

impl CleaningStats {
    /// Derives medians and modes from `source` (the training month).
    pub fn fit(source: &[CustomerRecord]) -> Result<Self> {
        if source.is_empty() {
            return Err(Error::EmptyStatsSource);
        }
        let mut fill = BTreeMap::new();
        for &field in Field::ALL.iter().filter(|f| imputable(**f)) {
            let imp = if field.is_numeric() {
                let mut vals: Vec<f64> = source
                    .iter()
                    .filter_map(|r| {
                        let days = f64::from(r.month.days_in_month());
                        r.number(field).map(|v| corrected(field, v, days))
                    })
                    .collect();
                if vals.is_empty() {
                    return Err(Error::AllNull(field.name()));
                }
                Imputation::Median(median(&mut vals))
            } else {
                let m = mode(source.iter().filter_map(|r| r.get(field)))
                    .ok_or(Error::AllNull(field.name()))?;
                Imputation::Mode(m)
            };
            fill.insert(field, imp);
        }
        Ok(Self { fill })
    }

    pub fn imputation(&self, field: Field) -> Option<&Imputation> {
        self.fill.get(&field)
    }

    pub fn apply(&self, records: &[CustomerRecord]) -> (Vec<CustomerRecord>, CleaningLog) {
        let mut log = CleaningLog::default();
        let out = records
            .iter()
            .map(|r| {
                let mut r = r.clone();
                let days = f64::from(r.month.days_in_month());
                for &field in Field::ALL {
                    match r.get(field) {
                        None => match self.fill.get(&field) {
                            Some(Imputation::Median(v)) => {
                                r.set(field, Some(Value::Number(*v)));
                                log.entry(field).imputed += 1;
                            }
                            Some(Imputation::Mode(v)) => {
                                r.set(field, Some(v.clone()));
                                log.entry(field).imputed += 1;
                            }
                            None => {}
                        },
                        Some(Value::Number(v)) if field.is_numeric() => {
                            let c = corrected(field, *v, days);
                            if c != *v {
                                r.set(field, Some(Value::Number(c)));
                                log.entry(field).clamped += 1;
                            }
                        }
                        Some(_) => {}
                    }
                }
                r
            })
            .collect();
        (out, log)
    }
}

/// Cleans `records` with statistics taken from `stats_source`.
pub fn clean(
    records: &[CustomerRecord],
    stats_source: &[CustomerRecord],
) -> Result<(Vec<CustomerRecord>, CleaningLog)> {
    Ok(CleaningStats::fit(stats_source)?.apply(records))
}
