//! SMOTE and its Borderline and Tomek-cleaned variants.

use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;

use super::borderline::borderline_classify;
use super::knn::knn;
use super::tomek::tomek_links;
use super::{ClassBalance, Origin, ResampleOutput, SamplerConfig, SamplerWarning};
use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rng::{stream_rng, StreamRng};

/// How many synthetic children each seed row gets so that exactly `total`
/// rows are produced.
///
/// With `total >= seeds`, every seed gets `total / seeds` children and the
/// remainder is handed out one each to seeds chosen uniformly without
/// replacement. Otherwise `total` seeds are chosen and each gets one.
pub(crate) fn allocate_children(seeds: usize, total: usize, rng: &mut StreamRng) -> Vec<usize> {
    if seeds == 0 {
        return Vec::new();
    }
    let mut counts;
    let extra;
    if total >= seeds {
        counts = vec![total / seeds; seeds];
        extra = total - (total / seeds) * seeds;
    } else {
        counts = vec![0; seeds];
        extra = total;
    }
    for i in index::sample(rng, seeds, extra) {
        counts[i] += 1;
    }
    counts
}

struct Child {
    seed: usize,
    neighbor: usize,
    row: Vec<f64>,
}

/// Generates `total` synthetic minority rows seeded from `seeds`, interpolating
/// toward neighbors drawn from the minority class.
pub(crate) fn oversample_from<A>(
    data: &LabeledDataset,
    cfg: &SamplerConfig,
    seeds: &[usize],
    total: usize,
    alpha: A,
) -> Result<ResampleOutput>
where
    A: Fn(&mut StreamRng) -> f64 + Sync,
{
    let balance = ClassBalance::of(&data.labels);
    let minority = data.rows_of_class(balance.minority);
    let counts = allocate_children(seeds.len(), total, &mut stream_rng(cfg.seed, 0));
    let x = &data.features;

    let children: Vec<Vec<Child>> = seeds
        .par_iter()
        .zip(counts.par_iter())
        .filter(|(_, &c)| c > 0)
        .map(|(&seed, &c)| {
            let neighbors = knn(x, seed, &minority, cfg.k_smote)?;
            let mut rng = stream_rng(cfg.seed, seed as u64 + 1);
            let picks: Vec<usize> = if c <= neighbors.len() {
                index::sample(&mut rng, neighbors.len(), c).into_vec()
            } else {
                (0..c)
                    .map(|_| rng.random_range(0..neighbors.len()))
                    .collect()
            };
            let base = x.row(seed);
            Ok(picks
                .into_iter()
                .map(|p| {
                    let neighbor = neighbors[p];
                    let a = alpha(&mut rng);
                    let row = base
                        .iter()
                        .zip(x.row(neighbor))
                        .map(|(xi, xn)| xi + a * (xn - xi))
                        .collect();
                    Child {
                        seed,
                        neighbor,
                        row,
                    }
                })
                .collect())
        })
        .collect::<Result<_>>()?;

    let mut features = Matrix::from_vec(x.rows(), x.cols(), x.as_slice().to_vec())?;
    let mut labels = data.labels.clone();
    let mut origin: Vec<Origin> = (0..data.len()).map(Origin::Original).collect();
    for child in children.into_iter().flatten() {
        features.push_row(&child.row)?;
        labels.push(balance.minority);
        origin.push(Origin::Synthetic {
            seed: child.seed,
            neighbor: child.neighbor,
        });
    }
    Ok(ResampleOutput {
        dataset: LabeledDataset {
            features,
            labels,
            feature_names: data.feature_names.clone(),
            standardization: data.standardization.clone(),
        },
        origin,
        removed: Vec::new(),
        seed: cfg.seed,
        warning: None,
    })
}

fn uniform_alpha(rng: &mut StreamRng) -> f64 {
    rng.random::<f64>()
}

fn check_minority(balance: &ClassBalance) -> Result<()> {
    if balance.n_minority < 2 {
        return Err(Error::TooFewMinority {
            needed: 2,
            found: balance.n_minority,
        });
    }
    Ok(())
}

pub(crate) fn smote_with_alpha<A>(
    data: &LabeledDataset,
    cfg: &SamplerConfig,
    alpha: A,
) -> Result<ResampleOutput>
where
    A: Fn(&mut StreamRng) -> f64 + Sync,
{
    cfg.validate()?;
    let balance = ClassBalance::of(&data.labels);
    check_minority(&balance)?;
    let total = balance.shortfall(cfg.target_ratio);
    if total == 0 {
        return Ok(ResampleOutput::unchanged(
            data,
            cfg.seed,
            Some(SamplerWarning::AlreadyBalanced),
        ));
    }
    let seeds = data.rows_of_class(balance.minority);
    oversample_from(data, cfg, &seeds, total, alpha)
}

/// Synthetic minority over-sampling up to `cfg.target_ratio`.
///
/// Each new row is `x_i + alpha * (x_hat - x_i)` with a fresh uniform `alpha`,
/// where `x_hat` is drawn from the `k_smote` minority neighbors of `x_i`
/// (without replacement while enough neighbors remain). Synthetic rows are
/// appended after the original rows.
pub fn smote(data: &LabeledDataset, cfg: &SamplerConfig) -> Result<ResampleOutput> {
    smote_with_alpha(data, cfg, uniform_alpha)
}

/// SMOTE seeded only from danger examples, i.e. minority rows whose
/// `m_borderline` nearest neighbors are at least half, but not all, majority.
/// Neighbor pools remain the whole minority class.
pub fn borderline_smote(data: &LabeledDataset, cfg: &SamplerConfig) -> Result<ResampleOutput> {
    cfg.validate()?;
    let balance = ClassBalance::of(&data.labels);
    check_minority(&balance)?;
    let total = balance.shortfall(cfg.target_ratio);
    if total == 0 {
        return Ok(ResampleOutput::unchanged(
            data,
            cfg.seed,
            Some(SamplerWarning::AlreadyBalanced),
        ));
    }
    let partition = borderline_classify(data, cfg.m_borderline)?;
    if partition.danger.is_empty() {
        return Ok(ResampleOutput::unchanged(
            data,
            cfg.seed,
            Some(SamplerWarning::EmptyDangerSet),
        ));
    }
    oversample_from(data, cfg, &partition.danger, total, uniform_alpha)
}

/// SMOTE, then removal of both endpoints of every Tomek link found once on the
/// augmented set.
pub fn smote_tomek(data: &LabeledDataset, cfg: &SamplerConfig) -> Result<ResampleOutput> {
    let augmented = smote(data, cfg)?;
    let links = tomek_links(&augmented.dataset);
    let mut drop: Vec<usize> = links.iter().flat_map(|&(i, j)| [i, j]).collect();
    drop.sort_unstable();
    drop.dedup();
    Ok(augmented.without_rows(&drop))
}
