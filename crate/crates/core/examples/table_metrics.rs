//! Metric arithmetic: a confusion matrix from predictions, the derived rates,
//! and F-measure / G-mean recomputed from reference precision, recall and TNR
//! triples.
//!
//! cargo run --example table_metrics

use churn_kit::metrics::{confusion, evaluate, MetricSet};

fn show(v: Option<f64>) -> String {
    v.map_or("undefined".into(), |v| format!("{v:.4}"))
}

fn main() -> churn_kit::Result<()> {
    let predicted = [1, 1, 0, 1, 0, 0, 0, 1];
    let actual = [1, 0, 1, 1, 0, 0, 0, 0];
    let cm = confusion(&predicted, &actual)?;
    println!("tp {} fp {} fn {} tn {}", cm.tp, cm.fp, cm.fn_, cm.tn);
    let m = evaluate(&cm);
    println!(
        "precision {}  recall {}  tnr {}  f {}  g {}\n",
        show(m.precision),
        show(m.recall),
        show(m.tnr),
        show(m.f_measure),
        show(m.g_mean)
    );

    println!("random forest, three month pairs:");
    println!("{:>9} {:>8} {:>8} {:>8} {:>8}", "precision", "recall", "tnr", "F", "G");
    for (p, r, t) in [(0.8383, 0.3292, 0.9952), (0.7838, 0.3944, 0.9920), (0.7559, 0.3312, 0.9924)] {
        let m = MetricSet::from_rates(Some(p), Some(r), Some(t));
        println!(
            "{p:>9} {r:>8} {t:>8} {:>8.3} {:>8.3}",
            m.f_measure.unwrap(),
            m.g_mean.unwrap()
        );
    }

    // no positive predictions: precision and F are undefined, not zero
    let m = evaluate(&confusion(&[0, 0, 0], &[1, 0, 0])?);
    println!("\nall-negative predictor: precision {}  f {}  g {}", show(m.precision), show(m.f_measure), show(m.g_mean));
    Ok(())
}
