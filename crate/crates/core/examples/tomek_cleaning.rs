//! Finds Tomek links and compares the three ways they are used: plain
//! under-sampling, SMOTE followed by link removal, and random under-sampling
//! for reference.
//!
//! cargo run --example tomek_cleaning

use churn_kit::dataset::LabeledDataset;
use churn_kit::rng::stream_rng;
use churn_kit::sampler::{random_under, smote_tomek, tomek_links, tomek_under, SamplerConfig};
use rand::Rng;

fn summary(name: &str, d: &LabeledDataset) {
    let pos = d.labels.iter().filter(|&&l| l == 1).count();
    println!("{name:<14} {:>4} rows  {:>4} minority  {:>4} majority", d.len(), pos, d.len() - pos);
}

fn main() -> churn_kit::Result<()> {
    let mut rng = stream_rng(11, 0);
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for i in 0..400 {
        let y = u8::from(i % 8 == 0);
        let center = if y == 1 { 1.0 } else { -0.5 };
        rows.push([center + rng.random_range(-1.2..1.2), rng.random_range(-1.0..1.0)]);
        labels.push(y);
    }
    let data = LabeledDataset::from_rows(&rows, labels)?;

    let links = tomek_links(&data);
    println!("{} Tomek links, e.g. {:?}\n", links.len(), &links[..links.len().min(4)]);

    summary("input", &data);
    summary("tomek-under", &tomek_under(&data)?.dataset);
    let cfg = SamplerConfig {
        seed: 5,
        ..Default::default()
    };
    let st = smote_tomek(&data, &cfg)?;
    summary("smote-tomek", &st.dataset);
    println!("{:<14} {} rows removed after oversampling", "", st.removed.len());
    summary("random-under", &random_under(&data, &cfg)?.dataset);
    Ok(())
}
