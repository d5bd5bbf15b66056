//! One train-month / test-month experiment: load, clean, filter, join,
//! encode, resample the training split, fit, predict and score.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::seq::SliceRandom;

use super::report::ReportRow;
use crate::baselines::{train_linear_svm, train_logreg, LinearModel, LogisticConfig, SvmConfig, DEFAULT_SVM_C};
use crate::dataset::{build_window_pair, load_months, LabeledDataset, Preprocessing, YearMonth};
use crate::error::{Error, Result};
use crate::forest::{class_weights, train_forest, ForestConfig, ForestModel, WeightMode, DEFAULT_TREES};
use crate::metrics::{confusion, evaluate, time_into, time_phase, ConfusionMatrix, Phase, PhaseTimings};
use crate::rng::{mix_seed, stream_rng};
use crate::sampler::{SamplerConfig, SamplerKind, SamplerWarning};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassifierKind {
    Lr,
    Svm,
    Rf,
    RfCostSensitive,
}

impl ClassifierKind {
    pub const ALL: [ClassifierKind; 4] = [
        ClassifierKind::Lr,
        ClassifierKind::Svm,
        ClassifierKind::Rf,
        ClassifierKind::RfCostSensitive,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClassifierKind::Lr => "lr",
            ClassifierKind::Svm => "svm",
            ClassifierKind::Rf => "rf",
            ClassifierKind::RfCostSensitive => "rf-cost-sensitive",
        }
    }
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassifierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s.trim())
            .ok_or_else(|| Error::UnknownName {
                kind: "classifier",
                name: s.to_string(),
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifierConfig {
    pub kind: ClassifierKind,
    pub n_trees: usize,
    pub features_per_split: Option<usize>,
    pub max_depth: Option<usize>,
    pub svm_c: f64,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        Self {
            kind: ClassifierKind::Rf,
            n_trees: DEFAULT_TREES,
            features_per_split: None,
            max_depth: None,
            svm_c: DEFAULT_SVM_C,
        }
    }
}

impl ClassifierConfig {
    pub fn forest_config(&self) -> ForestConfig {
        let mut cfg = ForestConfig {
            n_trees: self.n_trees,
            ..Default::default()
        };
        cfg.tree.features_per_split = self.features_per_split;
        cfg.tree.max_depth = self.max_depth;
        cfg
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub data_dir: PathBuf,
    pub train_month: YearMonth,
    pub test_month: YearMonth,
    pub sampler: SamplerKind,
    pub sampler_config: SamplerConfig,
    pub classifier: ClassifierConfig,
    pub seed: u64,
    pub output_dir: PathBuf,
    /// When false, timing columns are left empty so reports are byte-stable.
    pub record_timings: bool,
}

impl ExperimentConfig {
    pub fn new(data_dir: impl Into<PathBuf>, train_month: YearMonth, test_month: YearMonth) -> Self {
        Self {
            data_dir: data_dir.into(),
            train_month,
            test_month,
            sampler: SamplerKind::None,
            sampler_config: SamplerConfig::default(),
            classifier: ClassifierConfig::default(),
            seed: 0,
            output_dir: PathBuf::from("."),
            record_timings: true,
        }
    }

    pub fn experiment_id(&self) -> String {
        format!(
            "{}-{}-{}-{}",
            self.train_month, self.test_month, self.sampler, self.classifier.kind
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.train_month == self.test_month {
            return Err(Error::InvalidParameter(format!(
                "train and test month are both {}",
                self.train_month
            )));
        }
        self.sampler_config.validate()
    }

    /// Months read from disk: `T-2 ..= T` and `T+2` for both windows.
    pub fn required_months(&self) -> Vec<YearMonth> {
        let mut months: Vec<YearMonth> = [self.train_month, self.test_month]
            .iter()
            .flat_map(|&t| [t.add_months(-2), t.add_months(-1), t, t.add_months(2)])
            .collect();
        months.sort();
        months.dedup();
        months
    }

    pub fn model_path(&self) -> PathBuf {
        self.output_dir.join(format!("{}.model", self.experiment_id()))
    }

    pub fn report_path(&self) -> PathBuf {
        self.output_dir.join(format!("{}.csv", self.experiment_id()))
    }
}

/// Encoded train and test windows sharing train-fitted preprocessing.
#[derive(Debug, Clone)]
pub struct PreparedData {
    pub train: LabeledDataset,
    pub test: LabeledDataset,
    pub test_customer_ids: Vec<String>,
    pub preprocessing: Preprocessing,
}

/// Loads the required months and builds both windows. Cleaning statistics,
/// category levels and standardization come from the training month only.
pub fn prepare(data_dir: &Path, train_month: YearMonth, test_month: YearMonth) -> Result<PreparedData> {
    let mut cfg = ExperimentConfig::new(data_dir, train_month, test_month);
    cfg.output_dir = PathBuf::new();
    let by_month = load_months(data_dir, cfg.required_months())?;
    let train = build_window_pair(&by_month, train_month, None)?;
    let test = build_window_pair(&by_month, test_month, Some(&train.preprocessing))?;
    Ok(PreparedData {
        train: train.dataset,
        test: test.dataset,
        test_customer_ids: test.customer_ids,
        preprocessing: train.preprocessing,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum TrainedModel {
    Forest(ForestModel),
    Linear(LinearModel),
}

impl TrainedModel {
    pub fn predict_batch(&self, data: &LabeledDataset) -> Result<Vec<u8>> {
        match self {
            TrainedModel::Forest(m) => m.predict_batch(&data.features),
            TrainedModel::Linear(m) => data
                .features
                .iter_rows()
                .map(|x| m.predict_class(x))
                .collect(),
        }
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        match self {
            TrainedModel::Forest(m) => m.save(path),
            TrainedModel::Linear(m) => m.save(path),
        }
    }
}

pub fn train_classifier(data: &LabeledDataset, cfg: &ClassifierConfig, seed: u64) -> Result<TrainedModel> {
    let [neg, pos] = data.class_counts();
    if neg == 0 || pos == 0 {
        return Err(Error::SingleClass);
    }
    Ok(match cfg.kind {
        ClassifierKind::Lr => TrainedModel::Linear(train_logreg(
            data,
            &LogisticConfig {
                seed,
                ..Default::default()
            },
        )?),
        ClassifierKind::Svm => TrainedModel::Linear(train_linear_svm(
            data,
            &SvmConfig {
                c: cfg.svm_c,
                seed,
                ..Default::default()
            },
        )?),
        ClassifierKind::Rf | ClassifierKind::RfCostSensitive => {
            let mode = if cfg.kind == ClassifierKind::RfCostSensitive {
                WeightMode::Balanced
            } else {
                WeightMode::Uniform
            };
            let weights = class_weights(&data.labels, mode)?;
            TrainedModel::Forest(train_forest(data, &cfg.forest_config(), weights, seed)?)
        }
    })
}

/// Everything produced by one experiment run.
#[derive(Debug, Clone)]
pub struct EvaluationReport {
    pub row: ReportRow,
    pub confusion: ConfusionMatrix,
    pub train_rows: usize,
    pub resampled_rows: usize,
    pub test_rows: usize,
    pub sampler_warning: Option<SamplerWarning>,
    pub model: TrainedModel,
    pub predictions: Vec<u8>,
}

/// Samples, trains and evaluates on already prepared windows. The test split
/// is never resampled.
pub fn run_prepared(cfg: &ExperimentConfig, data: &PreparedData) -> Result<EvaluationReport> {
    cfg.validate()?;
    let mut timings = PhaseTimings::default();
    let sampler_cfg = SamplerConfig {
        seed: cfg.seed,
        ..cfg.sampler_config.clone()
    };
    let (result, total_s) = time_phase(|| -> Result<_> {
        let sampled = if cfg.sampler == SamplerKind::None {
            cfg.sampler.apply(&data.train, &sampler_cfg)?
        } else {
            time_into(&mut timings, Phase::Sampling, || {
                cfg.sampler.apply(&data.train, &sampler_cfg)
            })?
        };
        let model = time_into(&mut timings, Phase::Training, || {
            train_classifier(&sampled.dataset, &cfg.classifier, mix_seed(cfg.seed, 1))
        })?;
        let predictions = model.predict_batch(&data.test)?;
        Ok((sampled, model, predictions))
    });
    let (sampled, model, predictions) = result?;
    timings.record(Phase::Total, total_s);
    let cm = confusion(&predictions, &data.test.labels)?;
    if !cfg.record_timings {
        timings = PhaseTimings::default();
    }
    let row = ReportRow {
        experiment_id: cfg.experiment_id(),
        train_month: cfg.train_month.to_string(),
        test_month: cfg.test_month.to_string(),
        sampler: cfg.sampler.to_string(),
        classifier: cfg.classifier.kind.to_string(),
        metrics: evaluate(&cm),
        timings,
        status: None,
    };
    Ok(EvaluationReport {
        row,
        confusion: cm,
        train_rows: data.train.len(),
        resampled_rows: sampled.dataset.len(),
        test_rows: data.test.len(),
        sampler_warning: sampled.warning,
        model,
        predictions,
    })
}

/// Full chain for one configuration. Writes the trained model and a one-row
/// CSV report into `cfg.output_dir`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<EvaluationReport> {
    cfg.validate()?;
    let data = prepare(&cfg.data_dir, cfg.train_month, cfg.test_month)?;
    let report = run_prepared(cfg, &data)?;
    std::fs::create_dir_all(&cfg.output_dir).map_err(|e| Error::io(&cfg.output_dir, e))?;
    report.model.save(cfg.model_path())?;
    super::report::write_csv_report(&cfg.report_path(), std::slice::from_ref(&report.row))?;
    Ok(report)
}

/// Copy of `data` with labels shuffled; a sanity control that keeps the class
/// balance but destroys any feature-label association.
pub fn permute_labels(data: &LabeledDataset, seed: u64) -> LabeledDataset {
    let mut out = data.clone();
    out.labels.shuffle(&mut stream_rng(mix_seed(seed, 0x9e), 0));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classifier_names_round_trip() {
        for k in ClassifierKind::ALL {
            assert_eq!(k.name().parse::<ClassifierKind>().unwrap(), k);
        }
        assert!(matches!(
            "xgboost".parse::<ClassifierKind>(),
            Err(Error::UnknownName { .. })
        ));
    }

    #[test]
    fn required_months_cover_both_windows() {
        let cfg = ExperimentConfig::new(".", "201507".parse().unwrap(), "201508".parse().unwrap());
        let got: Vec<String> = cfg.required_months().iter().map(|m| m.to_string()).collect();
        assert_eq!(got, ["201505", "201506", "201507", "201508", "201509", "201510"]);
        assert_eq!(cfg.experiment_id(), "201507-201508-none-rf");
    }

    #[test]
    fn same_month_rejected() {
        let m = "201507".parse().unwrap();
        assert!(ExperimentConfig::new(".", m, m).validate().is_err());
    }

    #[test]
    fn permutation_keeps_class_counts() {
        let data = LabeledDataset::from_rows(&[[0.0], [1.0], [2.0], [3.0]], vec![0, 0, 1, 1]).unwrap();
        let p = permute_labels(&data, 4);
        assert_eq!(p.class_counts(), data.class_counts());
    }
}
