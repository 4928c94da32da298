use evspace::metric::{
    classify_pair, comparing_function_metric, indexed_labels, leq_metrics, partial_comparing_function,
    random_metric, scale_metric, transform_bounded, transform_min, validate_metric, Carrier, Classification,
    LazyMetric, MetricMatrix,
};
use evspace::{q, Rational};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn metric(seed: u64, n: usize) -> MetricMatrix {
    random_metric(&mut ChaCha8Rng::seed_from_u64(seed), indexed_labels(n))
}

proptest! {
    #[test]
    fn rationals_round_trip_through_text(p in -10_000i64..10_000, d in 1i64..500) {
        let x = q(p, d);
        let back: Rational = x.to_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn random_metrics_validate(seed: u64, n in 2usize..9) {
        prop_assert!(validate_metric(&metric(seed, n)).unwrap().pass);
    }

    #[test]
    fn transforms_are_metrics_below_the_input(seed: u64, n in 2usize..9) {
        let rho = metric(seed, n);
        for t in [transform_bounded(&rho).unwrap(), transform_min(&rho).unwrap()] {
            prop_assert!(validate_metric(&t).unwrap().pass);
            prop_assert!(leq_metrics(&t, &rho).unwrap());
        }
    }

    #[test]
    fn comparing_scales_linearly(seed: u64, n in 2usize..8, a in 1i64..50, b in 1i64..9) {
        let d = metric(seed, n);
        let rho = metric(seed.wrapping_add(1), n);
        let alpha = q(a, b);
        let base = comparing_function_metric(&d, &rho).unwrap().value;
        let scaled = comparing_function_metric(&d, &scale_metric(&alpha, &rho)).unwrap().value;
        prop_assert_eq!(scaled, alpha * base);
        prop_assert_eq!(comparing_function_metric(&rho, &rho).unwrap().value, Rational::one());
    }

    #[test]
    fn classification_is_symmetric_up_to_swap(seed: u64, n in 2usize..8) {
        let d = metric(seed, n);
        let rho = metric(seed ^ 0xabcdef, n);
        let forward = classify_pair(&d, &rho).unwrap();
        let backward = classify_pair(&rho, &d).unwrap();
        prop_assert_eq!(forward.classification, backward.classification.swapped());
        // Finite carriers never separate two metrics.
        prop_assert_eq!(forward.classification, Classification::MutuallyDependent);
        let s = forward.sandwich.unwrap();
        prop_assert!(s.lower_holds && s.upper_holds);
    }

    #[test]
    fn partial_bounds_never_increase(a in 2usize..10, b in 1usize..10, c in 1usize..10) {
        let depths = [a, a + b, a + b + c];
        let d = LazyMetric::Discrete { carrier: Carrier::Indexed };
        for (x, y) in [(&d, &LazyMetric::Shrinking), (&LazyMetric::Shrinking, &d)] {
            prop_assert!(partial_comparing_function(x, y, &depths).unwrap().nonincreasing);
        }
    }
}

#[test]
fn matrix_json_and_csv_agree() {
    let json = r#"{"labels": ["a", "b", "c"], "rows": [["0", "0.5", "1"], ["1/2", 0, "3/2"], [1, "1.5", "0"]]}"#;
    let m: MetricMatrix = serde_json::from_str(json).unwrap();
    let back = MetricMatrix::from_csv(&m.to_csv()).unwrap();
    assert_eq!(m, back);
    assert!(validate_metric(&m).unwrap().pass);
    let text = serde_json::to_string(&m).unwrap();
    assert!(text.contains("\"1/2\"") && !text.contains("0.5"));
}

#[test]
fn triangle_violation_is_reported_with_labels() {
    let m = MetricMatrix::new(
        vec!["a".into(), "b".into(), "c".into()],
        vec![
            vec![q(0, 1), q(1, 1), q(5, 1)],
            vec![q(1, 1), q(0, 1), q(1, 1)],
            vec![q(5, 1), q(1, 1), q(0, 1)],
        ],
    )
    .unwrap();
    let v = validate_metric(&m).unwrap();
    assert!(!v.pass);
    let violation = v.violation.unwrap();
    assert!(violation.holds_in(&m));
    assert_eq!(v.violating_labels.len(), 3);
}
