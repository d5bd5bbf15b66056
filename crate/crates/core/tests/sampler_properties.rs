mod common;

use std::collections::HashMap;

use churn_kit::dataset::LabeledDataset;
use churn_kit::sampler::{
    borderline_classify, borderline_smote, random_over, random_under, smote, smote_tomek, tomek_links, tomek_under,
    Origin, SamplerConfig, SamplerKind, SamplerWarning,
};
use churn_kit::Error;
use proptest::prelude::*;

fn imbalanced(n_min: usize, n_maj: usize, d: usize, seed: u64) -> LabeledDataset {
    let mut r = common::rng(seed);
    use rand::Rng;
    let rows: Vec<Vec<f64>> = (0..n_min + n_maj)
        .map(|i| {
            let shift = if i < n_min { 1.0 } else { 0.0 };
            (0..d).map(|_| shift + r.random_range(-1.0..1.0)).collect()
        })
        .collect();
    let labels = (0..n_min + n_maj).map(|i| u8::from(i < n_min)).collect();
    LabeledDataset::from_rows(&rows, labels).unwrap()
}

fn cfg(seed: u64) -> SamplerConfig {
    SamplerConfig {
        seed,
        ..Default::default()
    }
}

/// Every synthetic row lies on the segment from its seed to its neighbor, and
/// the neighbor is one of the seed's `k` nearest minority rows.
fn check_segments(data: &LabeledDataset, out: &churn_kit::sampler::ResampleOutput, k: usize) {
    let minority = data.rows_of_class(1);
    for (row, o) in out.origin.iter().enumerate() {
        let Origin::Synthetic { seed, neighbor } = *o else { continue };
        assert!(common::brute_knn(data, seed, &minority, k).contains(&neighbor));
        let xi = data.features.row(seed);
        let xn = data.features.row(neighbor);
        let x = out.dataset.features.row(row);
        let (mut num, mut den) = (0.0, 0.0);
        for c in 0..x.len() {
            num += (x[c] - xi[c]) * (xn[c] - xi[c]);
            den += (xn[c] - xi[c]) * (xn[c] - xi[c]);
        }
        let a = if den > 0.0 { num / den } else { 0.0 };
        assert!((-1e-12..=1.0 + 1e-12).contains(&a));
        for c in 0..x.len() {
            assert!((x[c] - (xi[c] + a * (xn[c] - xi[c]))).abs() <= 1e-9);
        }
        assert_eq!(out.dataset.labels[row], 1);
    }
}

#[test]
fn smote_balances_and_stays_on_segments() {
    let data = imbalanced(40, 200, 3, 1);
    let out = smote(&data, &cfg(5)).unwrap();
    assert_eq!(out.dataset.class_counts(), [200, 200]);
    assert_eq!(out.synthetic_count(), 160);
    // originals untouched, in place
    for i in 0..data.len() {
        assert_eq!(out.dataset.features.row(i), data.features.row(i));
        assert_eq!(out.origin[i], Origin::Original(i));
    }
    check_segments(&data, &out, 5);
}

#[test]
fn smote_is_reproducible_and_seed_sensitive() {
    let data = imbalanced(30, 150, 4, 2);
    assert_eq!(smote(&data, &cfg(9)).unwrap(), smote(&data, &cfg(9)).unwrap());
    assert_ne!(
        smote(&data, &cfg(9)).unwrap().dataset.features,
        smote(&data, &cfg(10)).unwrap().dataset.features
    );
}

#[test]
fn smote_partial_ratio_and_balanced_warning() {
    let data = imbalanced(20, 100, 2, 3);
    let c = SamplerConfig {
        target_ratio: 0.5,
        ..cfg(0)
    };
    assert_eq!(smote(&data, &c).unwrap().dataset.class_counts(), [100, 50]);
    let balanced = imbalanced(50, 50, 2, 3);
    let out = smote(&balanced, &cfg(0)).unwrap();
    assert_eq!(out.warning, Some(SamplerWarning::AlreadyBalanced));
    assert_eq!(out.dataset, balanced);
}

#[test]
fn smote_needs_two_minority_rows() {
    let data = imbalanced(1, 10, 2, 4);
    assert!(matches!(smote(&data, &cfg(0)), Err(Error::TooFewMinority { .. })));
}

#[test]
fn borderline_smote_seeds_only_from_danger_rows() {
    let data = common::random_instance(8, 200, 2);
    let danger = borderline_classify(&data, 5).unwrap().danger;
    let out = borderline_smote(&data, &cfg(1)).unwrap();
    if danger.is_empty() {
        assert_eq!(out.warning, Some(SamplerWarning::EmptyDangerSet));
        return;
    }
    for o in &out.origin {
        if let Origin::Synthetic { seed, .. } = o {
            assert!(danger.contains(seed));
        }
    }
    let [n0, n1] = out.dataset.class_counts();
    assert_eq!(n0.min(n1), n0.max(n1));
}

#[test]
fn borderline_smote_without_danger_rows_is_a_no_op() {
    // well separated classes: every minority row is safe
    let rows: Vec<[f64; 1]> = (0..30).map(|i| [if i < 6 { 100.0 + i as f64 } else { i as f64 }]).collect();
    let labels = (0..30).map(|i| u8::from(i < 6)).collect();
    let data = LabeledDataset::from_rows(&rows, labels).unwrap();
    let out = borderline_smote(&data, &cfg(0)).unwrap();
    assert_eq!(out.warning, Some(SamplerWarning::EmptyDangerSet));
    assert_eq!(out.dataset, data);
}

#[test]
fn smote_tomek_removes_both_link_endpoints() {
    let data = common::random_instance(21, 150, 2);
    let augmented = smote(&data, &cfg(3)).unwrap();
    let links = tomek_links(&augmented.dataset);
    let out = smote_tomek(&data, &cfg(3)).unwrap();
    let mut expected: Vec<usize> = links.iter().flat_map(|&(i, j)| [i, j]).collect();
    expected.sort_unstable();
    expected.dedup();
    assert_eq!(out.removed, expected);
    assert_eq!(out.dataset.len(), augmented.dataset.len() - expected.len());
}

#[test]
fn random_under_keeps_every_minority_row() {
    let data = imbalanced(25, 300, 2, 5);
    let out = random_under(&data, &cfg(2)).unwrap();
    assert_eq!(out.dataset.class_counts(), [25, 25]);
    let kept: Vec<usize> = out
        .origin
        .iter()
        .map(|o| match o {
            Origin::Original(i) => *i,
            other => panic!("unexpected origin {other:?}"),
        })
        .collect();
    for i in 0..25 {
        assert!(kept.contains(&i));
    }
    assert_eq!(out.removed.len(), 275);
}

#[test]
fn tomek_under_drops_only_majority_endpoints() {
    let data = common::random_instance(33, 200, 2);
    let links = tomek_links(&data);
    let out = tomek_under(&data).unwrap();
    let [n0, n1] = data.class_counts();
    let minority = if n1 <= n0 { 1 } else { 0 };
    let mut expected: Vec<usize> = links
        .iter()
        .flat_map(|&(i, j)| [i, j])
        .filter(|&i| data.labels[i] != minority)
        .collect();
    expected.sort_unstable();
    expected.dedup();
    assert_eq!(out.removed, expected);
    assert_eq!(out.dataset.class_counts()[minority as usize], data.class_counts()[minority as usize]);
}

#[test]
fn random_over_replicates_minority_rows() {
    let data = imbalanced(10, 55, 3, 6);
    let out = random_over(&data, &cfg(0)).unwrap();
    assert_eq!(out.dataset.class_counts(), [55, 55]);
    for (row, o) in out.origin.iter().enumerate().skip(data.len()) {
        let Origin::Replicated { source } = *o else { panic!("{o:?}") };
        assert_eq!(data.labels[source], 1);
        assert_eq!(out.dataset.features.row(row), data.features.row(source));
    }
}

#[test]
fn sampler_names_round_trip() {
    assert_eq!(SamplerKind::ALL.len(), 7);
    for k in SamplerKind::ALL {
        assert_eq!(k.name().parse::<SamplerKind>().unwrap(), k);
    }
    assert!("adasyn".parse::<SamplerKind>().is_err());
    let data = imbalanced(10, 40, 2, 7);
    assert_eq!(SamplerKind::None.apply(&data, &cfg(0)).unwrap().dataset, data);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn smote_count_and_allocation(n_min in 2usize..40, extra in 1usize..120, d in 1usize..5, seed in 0u64..1000) {
        let data = imbalanced(n_min, n_min + extra, d, seed);
        let out = smote(&data, &cfg(seed)).unwrap();
        prop_assert_eq!(out.synthetic_count(), extra);
        let mut per_seed: HashMap<usize, usize> = HashMap::new();
        for o in &out.origin {
            if let Origin::Synthetic { seed, .. } = o {
                *per_seed.entry(*seed).or_default() += 1;
            }
        }
        let base = extra / n_min;
        let with_extra = per_seed.values().filter(|&&c| c == base + 1).count();
        prop_assert!(per_seed.values().all(|&c| c == base || c == base + 1));
        prop_assert_eq!(with_extra, extra % n_min);
        if base > 0 {
            prop_assert_eq!(per_seed.len(), n_min);
        }
        check_segments(&data, &out, 5);
    }

    #[test]
    fn samplers_never_touch_labels_of_originals(seed in 0u64..500) {
        let data = common::random_instance(seed, 60, 3);
        for kind in SamplerKind::ALL {
            let out = match kind.apply(&data, &cfg(seed)) {
                Ok(o) => o,
                Err(Error::TooFewMinority { .. }) => continue,
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            };
            prop_assert_eq!(out.origin.len(), out.dataset.len());
            for (row, o) in out.origin.iter().enumerate() {
                if let Origin::Original(i) = o {
                    prop_assert_eq!(out.dataset.labels[row], data.labels[*i]);
                    prop_assert_eq!(out.dataset.features.row(row), data.features.row(*i));
                }
            }
        }
    }
}
