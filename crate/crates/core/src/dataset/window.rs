//! Eligibility filtering and the `T -> T+2` label join.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::clean::{CleaningLog, CleaningStats};
use super::encode::{encode_features, FeatureEncoder};
use super::schema::{ChurnState, CustomerRecord, YearMonth};
use super::LabeledDataset;
use crate::error::{Error, Result};

pub type RecordsByMonth = BTreeMap<YearMonth, Vec<CustomerRecord>>;

/// Customers with a record in each of `T-2`, `T-1` and `T` that ends every
/// one of those months active.
pub fn eligibility_filter(records_by_month: &RecordsByMonth, t: YearMonth) -> Result<BTreeSet<String>> {
    let months = [t.add_months(-2), t.add_months(-1), t];
    let mut eligible: Option<BTreeSet<String>> = None;
    for m in months {
        let recs = records_by_month.get(&m).ok_or(Error::MissingMonth(m))?;
        let active: BTreeSet<String> = recs
            .iter()
            .filter(|r| r.end_state() == Some(ChurnState::Active))
            .map(|r| r.customer_id.clone())
            .collect();
        eligible = Some(match eligible {
            None => active,
            Some(prev) => prev.intersection(&active).cloned().collect(),
        });
    }
    Ok(eligible.unwrap_or_default())
}

/// Eligible month-`T` records with their raw `T+2` labels, in file order.
#[derive(Debug, Clone)]
pub struct WindowJoin {
    pub records: Vec<CustomerRecord>,
    pub labels: Vec<u8>,
}

/// Joins eligible month-`T` records to their churn state at the end of `T+2`.
/// A customer absent from the `T+2` extract is labeled churned. Month `T+1` is
/// never read.
pub fn join_window(records_by_month: &RecordsByMonth, t: YearMonth) -> Result<WindowJoin> {
    let outcome_month = t.add_months(2);
    let outcome = records_by_month
        .get(&outcome_month)
        .ok_or(Error::MissingMonth(outcome_month))?;
    let eligible = eligibility_filter(records_by_month, t)?;
    let outcome: HashMap<&str, Option<ChurnState>> = outcome
        .iter()
        .map(|r| (r.customer_id.as_str(), r.end_state()))
        .collect();

    let mut records = Vec::new();
    let mut labels = Vec::new();
    for r in &records_by_month[&t] {
        if !eligible.contains(&r.customer_id) {
            continue;
        }
        let churned = match outcome.get(r.customer_id.as_str()) {
            None => true,
            Some(state) => *state != Some(ChurnState::Active),
        };
        records.push(r.clone());
        labels.push(u8::from(churned));
    }
    Ok(WindowJoin { records, labels })
}

/// Fitted preprocessing carried from the training window to the test window.
#[derive(Debug, Clone)]
pub struct Preprocessing {
    pub cleaning: CleaningStats,
    pub encoder: FeatureEncoder,
}

#[derive(Debug, Clone)]
pub struct WindowPair {
    pub dataset: LabeledDataset,
    pub customer_ids: Vec<String>,
    pub preprocessing: Preprocessing,
    pub cleaning_log: CleaningLog,
}

/// Builds the labeled dataset for analysis month `t`: features from month `t`
/// (cleaned and encoded), labels from the end of `t+2`.
///
/// With `fitted = None` the cleaning statistics and encoder are fitted on the
/// eligible month-`t` records; otherwise the given ones are reused, which is
/// how a test window borrows training-month parameters.
pub fn build_window_pair(
    records_by_month: &RecordsByMonth,
    t: YearMonth,
    fitted: Option<&Preprocessing>,
) -> Result<WindowPair> {
    let join = join_window(records_by_month, t)?;
    let cleaning = match fitted {
        Some(p) => p.cleaning.clone(),
        None => CleaningStats::fit(&join.records)?,
    };
    let (cleaned, cleaning_log) = cleaning.apply(&join.records);
    let encoded = encode_features(&cleaned, t, fitted.map(|p| &p.encoder));
    let dataset = LabeledDataset {
        features: encoded.features,
        labels: join.labels,
        feature_names: encoded.encoder.columns().to_vec(),
        standardization: Some(encoded.encoder.standardization.clone()),
    };
    Ok(WindowPair {
        dataset,
        customer_ids: cleaned.into_iter().map(|r| r.customer_id).collect(),
        preprocessing: Preprocessing {
            cleaning,
            encoder: encoded.encoder,
        },
        cleaning_log,
    })
}
