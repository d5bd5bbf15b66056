//! Splits the minority class into safe, danger and noise examples and then
//! runs Borderline-SMOTE, which seeds only from the danger set.
//!
//! cargo run --example borderline_partition

use churn_kit::dataset::LabeledDataset;
use churn_kit::rng::stream_rng;
use churn_kit::sampler::{borderline_classify, borderline_smote, Origin, SamplerConfig};
use rand::Rng;

fn main() -> churn_kit::Result<()> {
    // minority blob overlapping the edge of a wider majority cloud
    let mut rng = stream_rng(3, 0);
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for _ in 0..30 {
        rows.push([rng.random_range(1.5..3.0), rng.random_range(-0.5..0.5)]);
        labels.push(1);
    }
    for _ in 0..200 {
        rows.push([rng.random_range(-3.0..3.5), rng.random_range(-1.5..1.5)]);
        labels.push(0);
    }
    let data = LabeledDataset::from_rows(&rows, labels)?;

    let m = 5;
    let part = borderline_classify(&data, m)?;
    println!("m = {m} neighbors over the whole set");
    println!("  safe   {:>3}  (fewer than half majority)", part.safe.len());
    println!("  danger {:>3}  (half or more, not all)", part.danger.len());
    println!("  noise  {:>3}  (all majority)", part.noise.len());

    let cfg = SamplerConfig {
        m_borderline: m,
        seed: 1,
        ..Default::default()
    };
    let out = borderline_smote(&data, &cfg)?;
    let seeds: std::collections::BTreeSet<usize> = out
        .origin
        .iter()
        .filter_map(|o| match o {
            Origin::Synthetic { seed, .. } => Some(*seed),
            _ => None,
        })
        .collect();
    println!(
        "\nborderline-smote added {} rows from {} distinct seeds, all in the danger set: {}",
        out.synthetic_count(),
        seeds.len(),
        seeds.iter().all(|s| part.danger.contains(s))
    );
    Ok(())
}
