use churn_kit::metrics::{confusion, evaluate, ConfusionMatrix, MetricSet};
use proptest::prelude::*;

fn labels(n: usize) -> impl Strategy<Value = (Vec<u8>, Vec<u8>)> {
    (1..=n).prop_flat_map(|len| (prop::collection::vec(0u8..2, len), prop::collection::vec(0u8..2, len)))
}

proptest! {
    #[test]
    fn counts_partition_the_examples((pred, actual) in labels(200)) {
        let cm = confusion(&pred, &actual).unwrap();
        prop_assert_eq!(cm.total() as usize, pred.len());
        let tp = pred.iter().zip(&actual).filter(|(&p, &a)| p == 1 && a == 1).count() as u64;
        prop_assert_eq!(cm.tp, tp);
    }

    #[test]
    fn permutation_invariant((pred, actual) in labels(100), rot in 0usize..100) {
        let k = rot % pred.len();
        let mut p2 = pred.clone();
        let mut a2 = actual.clone();
        p2.rotate_left(k);
        a2.rotate_left(k);
        p2.reverse();
        a2.reverse();
        prop_assert_eq!(evaluate(&confusion(&pred, &actual).unwrap()), evaluate(&confusion(&p2, &a2).unwrap()));
    }

    #[test]
    fn measure_identities(tp in 0u64..50, fp in 0u64..50, fn_ in 0u64..50, tn in 0u64..50) {
        let cm = ConfusionMatrix { tp, fp, fn_, tn };
        let m = evaluate(&cm);
        prop_assert_eq!(m.recall, m.tpr);
        if let (Some(r), Some(t), Some(g)) = (m.recall, m.tnr, m.g_mean) {
            prop_assert!((g * g - r * t).abs() < 1e-12);
        }
        if let (Some(p), Some(r), Some(f)) = (m.precision, m.recall, m.f_measure) {
            prop_assert!(f <= p.max(r) + 1e-12);
            prop_assert!(f <= 2.0 * p.min(r) + 1e-12);
            prop_assert!(f >= p.min(r) - 1e-12);
        }
        for v in [m.precision, m.recall, m.tnr, m.f_measure, m.g_mean].into_iter().flatten() {
            prop_assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn swapping_positive_class(tp in 0u64..50, fp in 0u64..50, fn_ in 0u64..50, tn in 0u64..50) {
        let cm = ConfusionMatrix { tp, fp, fn_, tn };
        let m = evaluate(&cm);
        let s = evaluate(&cm.swapped());
        prop_assert_eq!(s.tpr, m.tnr);
        prop_assert_eq!(s.tnr, m.tpr);
        let npv = (tn + fn_ > 0).then(|| tn as f64 / (tn + fn_) as f64);
        prop_assert_eq!(s.precision, npv);
        match (m.g_mean, s.g_mean) {
            (Some(a), Some(b)) => prop_assert!((a - b).abs() < 1e-12),
            (a, b) => prop_assert_eq!(a, b),
        }
    }
}

#[test]
fn from_rates_matches_counts() {
    let cm = ConfusionMatrix { tp: 30, fp: 10, fn_: 20, tn: 940 };
    let m = evaluate(&cm);
    let r = MetricSet::from_rates(m.precision, m.recall, m.tnr);
    assert_eq!(m, r);
}
