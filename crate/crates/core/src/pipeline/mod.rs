//! Synthetic data, experiment orchestration and reporting.

mod config;
mod experiment;
mod generator;
mod report;
mod suite;

pub use config::ConfigMap;
pub use experiment::{
    permute_labels, prepare, run_experiment, run_prepared, train_classifier, ClassifierConfig,
    ClassifierKind, EvaluationReport, ExperimentConfig, PreparedData, TrainedModel,
};
pub use generator::{
    generate_synthetic, ground_truth_path, read_ground_truth, simulate, GeneratorSpec, GroundTruth,
    SyntheticData,
};
pub use report::{
    average_rows, emit_report, read_csv_rows, render_markdown, write_csv_rows, ReportFormat,
    ReportRow, REPORT_COLUMNS,
};
pub use suite::{
    consecutive_pairs, run_suite, write_suite_report, SuiteConfig, SuiteReport, DATA_DIR_ENV,
};
