//! Tomek links: cross-class pairs that are each other's strict nearest
//! neighbors among all examples.

use rayon::prelude::*;

use crate::dataset::LabeledDataset;
use crate::matrix::squared_distance;

/// Every Tomek link as an `(i, j)` pair with `i < j`, sorted.
///
/// A pair qualifies when no third example is strictly closer to either
/// endpoint than the endpoints are to each other, so exactly equidistant third
/// points do not break a link.
pub fn tomek_links(data: &LabeledDataset) -> Vec<(usize, usize)> {
    let n = data.len();
    let x = &data.features;
    // all rows tied for nearest, per row
    let nearest: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let xi = x.row(i);
            let mut best = f64::INFINITY;
            let mut arg = Vec::new();
            for j in (0..n).filter(|&j| j != i) {
                let d = squared_distance(xi, x.row(j));
                if d < best {
                    best = d;
                    arg.clear();
                    arg.push(j);
                } else if d == best {
                    arg.push(j);
                }
            }
            arg
        })
        .collect();

    let mut links = Vec::new();
    for (i, nb) in nearest.iter().enumerate() {
        for &j in nb {
            if j > i && data.labels[i] != data.labels[j] && nearest[j].contains(&i) {
                links.push((i, j));
            }
        }
    }
    links
}
