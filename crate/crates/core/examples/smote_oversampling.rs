//! Oversamples a small imbalanced 2-D set with SMOTE and shows where the
//! synthetic rows came from.
//!
//! cargo run --example smote_oversampling

use churn_kit::dataset::LabeledDataset;
use churn_kit::rng::stream_rng;
use churn_kit::sampler::{smote, Origin, SamplerConfig};
use rand::Rng;

fn main() -> churn_kit::Result<()> {
    let mut rng = stream_rng(42, 0);
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for _ in 0..12 {
        rows.push([rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)]);
        labels.push(1);
    }
    for _ in 0..60 {
        rows.push([rng.random_range(0.5..3.0), rng.random_range(0.5..3.0)]);
        labels.push(0);
    }
    let data = LabeledDataset::from_rows(&rows, labels)?;

    let cfg = SamplerConfig {
        k_smote: 5,
        target_ratio: 0.5,
        seed: 7,
        ..Default::default()
    };
    let out = smote(&data, &cfg)?;
    let count = |d: &LabeledDataset, c| d.labels.iter().filter(|&&l| l == c).count();
    println!(
        "before: {} minority / {} majority",
        count(&data, 1),
        count(&data, 0)
    );
    println!(
        "after:  {} minority / {} majority ({} synthetic)",
        count(&out.dataset, 1),
        count(&out.dataset, 0),
        out.synthetic_count()
    );

    println!("\nfirst synthetic rows (each lies on the segment seed -> neighbor):");
    for (row, origin) in out.origin.iter().enumerate().filter(|(_, o)| o.tag() == "synthetic").take(5) {
        if let Origin::Synthetic { seed, neighbor } = *origin {
            let (a, b, x) = (data.features.row(seed), data.features.row(neighbor), out.dataset.features.row(row));
            println!(
                "  ({:.3}, {:.3}) between #{seed} ({:.3}, {:.3}) and #{neighbor} ({:.3}, {:.3})",
                x[0], x[1], a[0], a[1], b[0], b[1]
            );
        }
    }
    Ok(())
}
