#![allow(dead_code)]

use std::path::Path;

use churn_kit::dataset::{LabeledDataset, YearMonth};
use churn_kit::pipeline::{generate_synthetic, GeneratorSpec};
use churn_kit::sampler::BorderlinePartition;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random labeled points. Odd seeds use a small integer grid so that exact
/// distance ties are common.
pub fn random_instance(seed: u64, max_n: usize, max_d: usize) -> LabeledDataset {
    let mut r = rng(seed);
    let n = r.random_range(8..=max_n);
    let d = r.random_range(1..=max_d);
    let minority_share = r.random_range(0.05..0.5);
    let gridded = seed % 2 == 1;
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            (0..d)
                .map(|_| {
                    if gridded {
                        f64::from(r.random_range(0..4u8))
                    } else {
                        r.random_range(-1.0..1.0)
                    }
                })
                .collect()
        })
        .collect();
    let mut labels: Vec<u8> = (0..n).map(|_| u8::from(r.random_bool(minority_share))).collect();
    // both classes, with at least two minority rows
    labels[0] = 1;
    labels[1] = 1;
    labels[2] = 0;
    LabeledDataset::from_rows(&rows, labels).unwrap()
}

/// Two interleaving half circles with Gaussian jitter.
pub fn moons(n: usize, noise: f64, seed: u64) -> LabeledDataset {
    use rand_distr::{Distribution, Normal};
    let mut r = rng(seed);
    let jitter = Normal::new(0.0, noise).unwrap();
    let mut rows = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let t = r.random_range(0.0..std::f64::consts::PI);
        let (x, y, label) = if i % 2 == 0 {
            (t.cos(), t.sin(), 0)
        } else {
            (1.0 - t.cos(), 0.5 - t.sin(), 1)
        };
        rows.push([x + jitter.sample(&mut r), y + jitter.sample(&mut r)]);
        labels.push(label);
    }
    LabeledDataset::from_rows(&rows, labels).unwrap()
}

pub fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Full sort of the pool by `(distance, index)`.
pub fn brute_knn(data: &LabeledDataset, q: usize, pool: &[usize], k: usize) -> Vec<usize> {
    let x = &data.features;
    let mut c: Vec<(f64, usize)> = pool
        .iter()
        .filter(|&&j| j != q)
        .map(|&j| (sq_dist(x.row(q), x.row(j)), j))
        .collect();
    c.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    c.into_iter().take(k).map(|(_, j)| j).collect()
}

/// Cubic scan: a cross-class pair is a link when no third point is strictly
/// closer to either endpoint than the endpoints are to each other.
pub fn brute_tomek(data: &LabeledDataset) -> Vec<(usize, usize)> {
    let x = &data.features;
    let n = data.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if data.labels[i] == data.labels[j] {
                continue;
            }
            let dij = sq_dist(x.row(i), x.row(j));
            let blocked = (0..n).any(|k| {
                k != i
                    && k != j
                    && (sq_dist(x.row(i), x.row(k)) < dij || sq_dist(x.row(j), x.row(k)) < dij)
            });
            if !blocked {
                out.push((i, j));
            }
        }
    }
    out
}

pub fn brute_borderline(data: &LabeledDataset, m: usize) -> BorderlinePartition {
    let [n0, n1] = data.class_counts();
    let minority = if n1 <= n0 { 1 } else { 0 };
    let all: Vec<usize> = (0..data.len()).collect();
    let mut p = BorderlinePartition::default();
    for i in data.rows_of_class(minority) {
        let maj = brute_knn(data, i, &all, m)
            .into_iter()
            .filter(|&j| data.labels[j] != minority)
            .count();
        if maj == m {
            p.noise.push(i);
        } else if 2 * maj >= m {
            p.danger.push(i);
        } else {
            p.safe.push(i);
        }
    }
    p
}

pub fn months(first: &str, n: i32) -> Vec<YearMonth> {
    let first: YearMonth = first.parse().unwrap();
    (0..n).map(|i| first.add_months(i)).collect()
}

pub fn ym(s: &str) -> YearMonth {
    s.parse().unwrap()
}

/// Six months `201505..=201510` of synthetic extracts in `dir`.
pub fn write_synthetic(dir: &Path, n_customers: usize, seed: u64) -> GeneratorSpec {
    let spec = GeneratorSpec::new(n_customers, months("201505", 6), seed);
    generate_synthetic(&spec, dir).unwrap();
    spec
}

pub fn accuracy(pred: &[u8], truth: &[u8]) -> f64 {
    pred.iter().zip(truth).filter(|(a, b)| a == b).count() as f64 / truth.len() as f64
}
