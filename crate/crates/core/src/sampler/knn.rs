//! Exact Euclidean k-nearest-neighbor search by linear scan.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::{squared_distance, Matrix};

fn by_distance_then_index(a: &(f64, usize), b: &(f64, usize)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
}

/// The `k` members of `pool` closest to `point`, nearest first, skipping
/// `exclude`. Ties go to the lower row index. Returns every candidate when
/// fewer than `k` remain.
pub fn nearest_to_point(
    features: &Matrix,
    point: &[f64],
    exclude: Option<usize>,
    pool: &[usize],
    k: usize,
) -> Result<Vec<usize>> {
    if point.len() != features.cols() {
        return Err(Error::DimensionMismatch {
            expected: features.cols(),
            got: point.len(),
        });
    }
    let mut cand: Vec<(f64, usize)> = pool
        .iter()
        .filter(|&&i| Some(i) != exclude)
        .map(|&i| (squared_distance(point, features.row(i)), i))
        .collect();
    if cand.is_empty() {
        return Err(Error::EmptyPool);
    }
    let k = k.min(cand.len());
    if k == 0 {
        return Ok(Vec::new());
    }
    if k < cand.len() {
        cand.select_nth_unstable_by(k - 1, by_distance_then_index);
        cand.truncate(k);
    }
    cand.sort_unstable_by(by_distance_then_index);
    Ok(cand.into_iter().map(|(_, i)| i).collect())
}

/// Nearest neighbors of row `query` within `pool`, excluding the query itself.
pub fn knn(features: &Matrix, query: usize, pool: &[usize], k: usize) -> Result<Vec<usize>> {
    nearest_to_point(features, features.row(query), Some(query), pool, k)
}

/// [`knn`] for many queries; evaluated in parallel, results in query order.
pub fn knn_batch(
    features: &Matrix,
    queries: &[usize],
    pool: &[usize],
    k: usize,
) -> Result<Vec<Vec<usize>>> {
    queries
        .par_iter()
        .map(|&q| knn(features, q, pool, k))
        .collect()
}
