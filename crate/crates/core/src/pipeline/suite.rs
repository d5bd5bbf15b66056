//! Batches of experiments with per-method averages.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use super::config::ConfigMap;
use super::experiment::{prepare, run_prepared, ClassifierConfig, ClassifierKind, ExperimentConfig, PreparedData};
use super::report::{average_rows, emit_report, ReportFormat, ReportRow};
use crate::dataset::YearMonth;
use crate::error::{Error, Result};
use crate::sampler::{SamplerConfig, SamplerKind};

pub const DATA_DIR_ENV: &str = "CHURN_DATA_DIR";

/// Rows in config order followed by one average row per method.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub rows: Vec<ReportRow>,
    pub averages: Vec<ReportRow>,
}

impl SuiteReport {
    pub fn table(&self) -> Vec<ReportRow> {
        self.rows.iter().chain(&self.averages).cloned().collect()
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| !r.is_ok()).count()
    }
}

fn failed_row(cfg: &ExperimentConfig, err: &Error) -> ReportRow {
    ReportRow::failed(
        cfg.experiment_id(),
        cfg.train_month.to_string(),
        cfg.test_month.to_string(),
        cfg.sampler.to_string(),
        cfg.classifier.kind.to_string(),
        err.to_string(),
    )
}

/// Runs every configuration in order. A failing experiment becomes a failed
/// row and the suite carries on. Prepared windows are shared between configs
/// with the same data directory and month pair.
pub fn run_suite(cfgs: &[ExperimentConfig]) -> Result<SuiteReport> {
    if cfgs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut prepared: HashMap<(PathBuf, YearMonth, YearMonth), std::result::Result<PreparedData, String>> =
        HashMap::new();
    let mut rows = Vec::with_capacity(cfgs.len());
    for cfg in cfgs {
        let key = (cfg.data_dir.clone(), cfg.train_month, cfg.test_month);
        let data = prepared.entry(key).or_insert_with(|| {
            cfg.validate()
                .and_then(|_| prepare(&cfg.data_dir, cfg.train_month, cfg.test_month))
                .map_err(|e| e.to_string())
        });
        let row = match data {
            Ok(data) => match run_prepared(cfg, data) {
                Ok(report) => report.row,
                Err(e) => failed_row(cfg, &e),
            },
            Err(msg) => ReportRow {
                status: Some(msg.clone()),
                ..failed_row(cfg, &Error::EmptyInput)
            },
        };
        rows.push(row);
    }
    let averages = average_rows(&rows);
    Ok(SuiteReport { rows, averages })
}

/// A grid of month pairs, samplers and classifiers.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub data_dir: PathBuf,
    pub output_dir: PathBuf,
    pub month_pairs: Vec<(YearMonth, YearMonth)>,
    pub samplers: Vec<SamplerKind>,
    pub classifiers: Vec<ClassifierKind>,
    pub sampler_config: SamplerConfig,
    pub classifier: ClassifierConfig,
    pub seed: u64,
    pub record_timings: bool,
    pub formats: Vec<ReportFormat>,
}

/// Each month trains a model tested on the following month.
pub fn consecutive_pairs(train_months: &[YearMonth]) -> Vec<(YearMonth, YearMonth)> {
    train_months.iter().map(|&t| (t, t.add_months(1))).collect()
}

fn parse_month_range(v: &str) -> Result<Vec<YearMonth>> {
    let (a, b) = v
        .split_once(':')
        .ok_or_else(|| Error::InvalidMonth(format!("expected FROM:TO, got {v:?}")))?;
    let (a, b): (YearMonth, YearMonth) = (a.parse()?, b.parse()?);
    if b < a {
        return Err(Error::InvalidMonth(format!("{b} precedes {a}")));
    }
    Ok(YearMonth::range(a, b))
}

impl SuiteConfig {
    pub fn new(data_dir: impl Into<PathBuf>, train_months: &[YearMonth]) -> Self {
        Self {
            data_dir: data_dir.into(),
            output_dir: PathBuf::from("churn-out"),
            month_pairs: consecutive_pairs(train_months),
            samplers: SamplerKind::ALL.to_vec(),
            classifiers: vec![ClassifierKind::Rf],
            sampler_config: SamplerConfig::default(),
            classifier: ClassifierConfig::default(),
            seed: 0,
            record_timings: true,
            formats: vec![ReportFormat::Csv, ReportFormat::Markdown],
        }
    }

    /// Builds a suite from flat settings.
    ///
    /// Keys: `data_dir` (falls back to `CHURN_DATA_DIR`), `output_dir`,
    /// `months = FROM:TO` (every month but the last is a training month) or
    /// `train_months = a, b, ...`, `samplers`, `classifiers`, `seed`,
    /// `k_smote`, `m_borderline`, `target_ratio`, `trees`, `svm_c`,
    /// `features_per_split`, `max_depth`, `record_timings`, `format`
    /// (`csv`, `markdown` or `both`).
    pub fn from_map(map: &ConfigMap) -> Result<Self> {
        const KNOWN: [&str; 16] = [
            "data_dir",
            "output_dir",
            "months",
            "train_months",
            "samplers",
            "classifiers",
            "seed",
            "k_smote",
            "m_borderline",
            "target_ratio",
            "trees",
            "svm_c",
            "features_per_split",
            "max_depth",
            "record_timings",
            "format",
        ];
        if let Some(k) = map.keys().find(|k| !KNOWN.contains(k)) {
            return Err(Error::Config {
                line: 0,
                msg: format!("unknown key {k:?}"),
            });
        }
        let data_dir = match map.get("data_dir") {
            Some(d) => PathBuf::from(d),
            None => std::env::var_os(DATA_DIR_ENV).map(PathBuf::from).ok_or_else(|| Error::Config {
                line: 0,
                msg: format!("data_dir not set and {DATA_DIR_ENV} undefined"),
            })?,
        };
        let train_months: Vec<YearMonth> = match (map.get("months"), map.list("train_months")) {
            (Some(range), None) => {
                let mut all = parse_month_range(range)?;
                all.pop();
                all
            }
            (None, Some(list)) => list.iter().map(|m| m.parse()).collect::<Result<_>>()?,
            _ => {
                return Err(Error::Config {
                    line: 0,
                    msg: "set exactly one of `months` or `train_months`".into(),
                })
            }
        };
        if train_months.is_empty() {
            return Err(Error::Config {
                line: 0,
                msg: "no training months".into(),
            });
        }
        let mut cfg = Self::new(data_dir, &train_months);
        if let Some(d) = map.get("output_dir") {
            cfg.output_dir = PathBuf::from(d);
        }
        if let Some(list) = map.list("samplers") {
            cfg.samplers = if list == ["all"] {
                SamplerKind::ALL.to_vec()
            } else {
                list.iter().map(|s| s.parse()).collect::<Result<_>>()?
            };
        }
        if let Some(list) = map.list("classifiers") {
            cfg.classifiers = list.iter().map(|s| s.parse()).collect::<Result<_>>()?;
        }
        if let Some(v) = map.parsed("seed")? {
            cfg.seed = v;
        }
        if let Some(v) = map.parsed("k_smote")? {
            cfg.sampler_config.k_smote = v;
        }
        if let Some(v) = map.parsed("m_borderline")? {
            cfg.sampler_config.m_borderline = v;
        }
        if let Some(v) = map.parsed("target_ratio")? {
            cfg.sampler_config.target_ratio = v;
        }
        if let Some(v) = map.parsed("trees")? {
            cfg.classifier.n_trees = v;
        }
        if let Some(v) = map.parsed("svm_c")? {
            cfg.classifier.svm_c = v;
        }
        if let Some(v) = map.parsed("features_per_split")? {
            cfg.classifier.features_per_split = Some(v);
        }
        if let Some(v) = map.parsed("max_depth")? {
            cfg.classifier.max_depth = Some(v);
        }
        if let Some(v) = map.parsed("record_timings")? {
            cfg.record_timings = v;
        }
        if let Some(f) = map.get("format") {
            cfg.formats = match f {
                "both" => vec![ReportFormat::Csv, ReportFormat::Markdown],
                other => vec![other.parse()?],
            };
        }
        cfg.sampler_config.validate()?;
        Ok(cfg)
    }

    /// Experiments in month-pair, then classifier, then sampler order.
    pub fn experiments(&self) -> Vec<ExperimentConfig> {
        let mut out = Vec::new();
        for &(train, test) in &self.month_pairs {
            for &kind in &self.classifiers {
                for &sampler in &self.samplers {
                    out.push(ExperimentConfig {
                        data_dir: self.data_dir.clone(),
                        train_month: train,
                        test_month: test,
                        sampler,
                        sampler_config: self.sampler_config.clone(),
                        classifier: ClassifierConfig {
                            kind,
                            ..self.classifier.clone()
                        },
                        seed: self.seed,
                        output_dir: self.output_dir.clone(),
                        record_timings: self.record_timings,
                    });
                }
            }
        }
        out
    }

    /// Runs the grid and writes `report.csv` and/or `report.md` into the
    /// output directory.
    pub fn run_and_write(&self) -> Result<(SuiteReport, Vec<PathBuf>)> {
        let report = run_suite(&self.experiments())?;
        let paths = write_suite_report(&report, &self.output_dir, &self.formats)?;
        Ok((report, paths))
    }
}

pub fn write_suite_report(report: &SuiteReport, dir: &Path, formats: &[ReportFormat]) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let table = report.table();
    let mut paths = Vec::new();
    for &format in formats {
        let name = match format {
            ReportFormat::Csv => "report.csv",
            ReportFormat::Markdown => "report.md",
        };
        let path = dir.join(name);
        emit_report(&table, format, &path)?;
        paths.push(path);
    }
    Ok(paths)
}
