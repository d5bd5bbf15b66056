//! Runs every sampler against the random forest on a short run of months and
//! writes the CSV and markdown reports with per-method averages.
//!
//! cargo run --release --example method_suite

use churn_kit::dataset::YearMonth;
use churn_kit::pipeline::{generate_synthetic, render_markdown, GeneratorSpec, SuiteConfig};

fn main() -> churn_kit::Result<()> {
    let dir = std::env::temp_dir().join("churn-suite");
    let first = YearMonth::new(2015, 5)?;
    let spec = GeneratorSpec::new(3000, YearMonth::range(first, first.add_months(6)), 8);
    generate_synthetic(&spec, &dir)?;

    // train on July and August, each tested on the following month
    let train = [YearMonth::new(2015, 7)?, YearMonth::new(2015, 8)?];
    let mut suite = SuiteConfig::new(&dir, &train);
    suite.output_dir = dir.join("report");
    suite.classifier.n_trees = 40;
    suite.seed = 1;
    let (report, paths) = suite.run_and_write()?;
    print!("{}", render_markdown(&report.table()));
    println!("\n{} failed runs", report.failures());
    for p in paths {
        println!("wrote {}", p.display());
    }
    Ok(())
}
