//! Non-heuristic samplers plus Tomek-link under-sampling.

use rand::seq::index;
use rand::Rng;

use super::tomek::tomek_links;
use super::{ClassBalance, Origin, ResampleOutput, SamplerConfig, SamplerWarning};
use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};
use crate::rng::stream_rng;

/// Drops majority rows uniformly without replacement until the minority to
/// majority ratio reaches `cfg.target_ratio`.
pub fn random_under(data: &LabeledDataset, cfg: &SamplerConfig) -> Result<ResampleOutput> {
    cfg.validate()?;
    let balance = ClassBalance::of(&data.labels);
    let keep = balance.majority_target(cfg.target_ratio);
    if balance.n_majority <= keep {
        return Ok(ResampleOutput::unchanged(
            data,
            cfg.seed,
            Some(SamplerWarning::AlreadyBalanced),
        ));
    }
    let majority = data.rows_of_class(balance.majority);
    let mut rng = stream_rng(cfg.seed, 0);
    let mut kept = vec![false; majority.len()];
    for i in index::sample(&mut rng, majority.len(), keep) {
        kept[i] = true;
    }
    let drop: Vec<usize> = majority
        .iter()
        .zip(&kept)
        .filter(|(_, &k)| !k)
        .map(|(&row, _)| row)
        .collect();
    Ok(ResampleOutput::unchanged(data, cfg.seed, None).without_rows(&drop))
}

/// Removes the majority endpoint of every Tomek link; minority rows stay.
pub fn tomek_under(data: &LabeledDataset) -> Result<ResampleOutput> {
    let balance = ClassBalance::of(&data.labels);
    if balance.n_minority == 0 {
        return Err(Error::SingleClass);
    }
    let mut drop: Vec<usize> = tomek_links(data)
        .into_iter()
        .map(|(i, j)| if data.labels[i] == balance.majority { i } else { j })
        .collect();
    drop.sort_unstable();
    drop.dedup();
    Ok(ResampleOutput::unchanged(data, 0, None).without_rows(&drop))
}

/// Appends copies of minority rows, drawn uniformly with replacement, until
/// the target ratio is met.
pub fn random_over(data: &LabeledDataset, cfg: &SamplerConfig) -> Result<ResampleOutput> {
    cfg.validate()?;
    let balance = ClassBalance::of(&data.labels);
    let total = balance.shortfall(cfg.target_ratio);
    if total == 0 || balance.n_minority == 0 {
        return Ok(ResampleOutput::unchanged(
            data,
            cfg.seed,
            Some(SamplerWarning::AlreadyBalanced),
        ));
    }
    let minority = data.rows_of_class(balance.minority);
    let mut rng = stream_rng(cfg.seed, 0);
    let sources: Vec<usize> = (0..total)
        .map(|_| minority[rng.random_range(0..minority.len())])
        .collect();
    let mut rows: Vec<usize> = (0..data.len()).collect();
    rows.extend_from_slice(&sources);
    let mut origin: Vec<Origin> = (0..data.len()).map(Origin::Original).collect();
    origin.extend(sources.iter().map(|&source| Origin::Replicated { source }));
    Ok(ResampleOutput {
        dataset: data.select(&rows),
        origin,
        removed: Vec::new(),
        seed: cfg.seed,
        warning: None,
    })
}
