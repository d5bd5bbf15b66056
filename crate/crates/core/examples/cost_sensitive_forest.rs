//! Trains a plain and a cost-sensitive random forest on imbalanced data and
//! compares them; also shows that only the ratio of the class weights matters
//! and that models survive a save/load round trip.
//!
//! cargo run --release --example cost_sensitive_forest

use churn_kit::dataset::LabeledDataset;
use churn_kit::forest::{class_weights, train_forest, ClassWeights, ForestConfig, ForestModel, WeightMode};
use churn_kit::metrics::{confusion, evaluate};
use churn_kit::rng::stream_rng;
use rand::Rng;

fn noisy_ring(n: usize, seed: u64) -> churn_kit::Result<LabeledDataset> {
    let mut rng = stream_rng(seed, 0);
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for _ in 0..n {
        let x: [f64; 2] = [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
        let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
        // about one row in ten is a churner, concentrated near radius 1.5
        let p = if (r - 1.5).abs() < 0.2 { 0.55 } else { 0.04 };
        rows.push(x);
        labels.push(u8::from(rng.random_bool(p)));
    }
    LabeledDataset::from_rows(&rows, labels)
}

fn report(name: &str, model: &ForestModel, test: &LabeledDataset) -> churn_kit::Result<()> {
    let m = evaluate(&confusion(&model.predict_batch(&test.features)?, &test.labels)?);
    let f = |v: Option<f64>| v.map_or("n/a".to_string(), |v| format!("{v:.3}"));
    println!(
        "{name:<16} precision {}  recall {}  tnr {}  g-mean {}",
        f(m.precision),
        f(m.recall),
        f(m.tnr),
        f(m.g_mean)
    );
    Ok(())
}

fn main() -> churn_kit::Result<()> {
    let train = noisy_ring(3000, 1)?;
    let test = noisy_ring(3000, 2)?;
    let cfg = ForestConfig {
        n_trees: 50,
        ..Default::default()
    };

    let weights = class_weights(&train.labels, WeightMode::Balanced)?;
    println!("balanced class weights: {:?}\n", weights.0);

    let plain = train_forest(&train, &cfg, ClassWeights::UNIFORM, 9)?;
    let weighted = train_forest(&train, &cfg, weights, 9)?;
    report("random forest", &plain, &test)?;
    report("cost-sensitive", &weighted, &test)?;

    let rescaled = train_forest(&train, &cfg, weights.scaled(0.37), 9)?;
    println!(
        "\nweights scaled by 0.37 give the same predictions: {}",
        rescaled.predict_batch(&test.features)? == weighted.predict_batch(&test.features)?
    );

    let path = std::env::temp_dir().join("cost_sensitive_forest.model");
    weighted.save(&path)?;
    let loaded = ForestModel::load(&path)?;
    println!("reloaded model identical: {}", loaded == weighted);
    std::fs::remove_file(&path).ok();
    Ok(())
}
