//! Logistic regression and the linear SVM on the same data, including a sweep
//! over the SVM penalty grid.
//!
//! cargo run --example linear_baselines

use churn_kit::baselines::{
    log_likelihood, predict_logreg, svm_c_grid, svm_objective, train_linear_svm, train_logreg, LogisticConfig,
    SvmConfig,
};
use churn_kit::dataset::LabeledDataset;
use churn_kit::metrics::{confusion, evaluate};
use churn_kit::rng::stream_rng;
use rand::Rng;
use rand_distr::{Distribution, Normal};

fn blobs(n: usize, seed: u64) -> churn_kit::Result<LabeledDataset> {
    let mut rng = stream_rng(seed, 0);
    let noise = Normal::new(0.0, 1.0).unwrap();
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for _ in 0..n {
        let y = u8::from(rng.random_bool(0.2));
        let shift = if y == 1 { 1.5 } else { 0.0 };
        rows.push([shift + noise.sample(&mut rng), 0.5 * shift + noise.sample(&mut rng), noise.sample(&mut rng)]);
        labels.push(y);
    }
    LabeledDataset::from_rows(&rows, labels)
}

fn main() -> churn_kit::Result<()> {
    let train = blobs(2000, 1)?;
    let test = blobs(2000, 2)?;

    let lr = train_logreg(&train, &LogisticConfig::default())?;
    println!(
        "logistic: {} iterations, converged {}, mean log-likelihood {:.4}",
        lr.training.iterations,
        lr.training.converged,
        log_likelihood(&train, &lr.coefficients, lr.intercept)
    );
    println!("  coefficients {:.3?} intercept {:.3}", lr.coefficients, lr.intercept);
    let (class, p) = predict_logreg(&lr, test.features.row(0))?;
    println!("  first test row: p(churn) = {p:.3}, class {class}");

    println!("\nlinear SVM over the C grid:");
    println!("{:>10} {:>8} {:>8} {:>8} {:>12}", "C", "recall", "tnr", "g-mean", "objective");
    for c in svm_c_grid() {
        let svm = train_linear_svm(&train, &SvmConfig { c, ..Default::default() })?;
        let pred = (0..test.len())
            .map(|i| svm.predict_class(test.features.row(i)))
            .collect::<churn_kit::Result<Vec<u8>>>()?;
        let m = evaluate(&confusion(&pred, &test.labels)?);
        println!(
            "{c:>10} {:>8.3} {:>8.3} {:>8.3} {:>12.3}",
            m.recall.unwrap_or(0.0),
            m.tnr.unwrap_or(0.0),
            m.g_mean.unwrap_or(0.0),
            svm_objective(&train, &svm.coefficients, svm.intercept, c)
        );
    }
    Ok(())
}
