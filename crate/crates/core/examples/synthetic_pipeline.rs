//! End to end on generated data: write six monthly customer files, train on
//! one month, test on the next, and inspect the report row and model file.
//!
//! cargo run --release --example synthetic_pipeline [-- DIR]

use churn_kit::dataset::YearMonth;
use churn_kit::pipeline::{
    generate_synthetic, render_markdown, run_experiment, ClassifierKind, ExperimentConfig, GeneratorSpec,
};
use churn_kit::sampler::SamplerKind;

fn main() -> churn_kit::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(std::path::PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("churn-synthetic"));
    let first = YearMonth::new(2015, 5)?;
    let months = YearMonth::range(first, first.add_months(5));
    let spec = GeneratorSpec::new(5000, months, 2024);
    let files = generate_synthetic(&spec, &dir)?;
    println!("wrote {} files to {}", files.len(), dir.display());

    let mut cfg = ExperimentConfig::new(&dir, YearMonth::new(2015, 7)?, YearMonth::new(2015, 8)?);
    cfg.sampler = SamplerKind::BorderlineSmote;
    cfg.classifier.kind = ClassifierKind::RfCostSensitive;
    cfg.classifier.n_trees = 50;
    cfg.output_dir = dir.join("out");
    cfg.seed = 3;
    let report = run_experiment(&cfg)?;
    println!(
        "train rows {} -> {} after {}, test rows {}",
        report.train_rows, report.resampled_rows, cfg.sampler, report.test_rows
    );
    let cm = &report.confusion;
    println!("confusion: tp {} fp {} fn {} tn {}\n", cm.tp, cm.fp, cm.fn_, cm.tn);
    print!("{}", render_markdown(std::slice::from_ref(&report.row)));
    println!("\nmodel: {}\nreport: {}", cfg.model_path().display(), cfg.report_path().display());
    Ok(())
}
