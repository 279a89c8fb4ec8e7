mod common;

use proptest::prelude::*;

use poolcast::features::{autocorrelation, binned_entropy, extract_features, FEATURE_NAMES, N_FEATURES};

fn series() -> impl Strategy<Value = Vec<f64>> {
    (48usize..400, any::<u64>()).prop_map(|(n, seed)| {
        let mut r = common::rng(seed);
        let e = common::normals(&mut r, n);
        let mut x = vec![0.0; n];
        for t in 0..n {
            x[t] = e[t] + if t > 0 { 0.6 * x[t - 1] } else { 0.0 } + (t as f64 * std::f64::consts::TAU / 24.0).sin();
        }
        x
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn shift_moves_location_and_keeps_shape(x in series(), c in -100.0f64..100.0) {
        let f = extract_features(&x).unwrap();
        let shifted: Vec<f64> = x.iter().map(|v| v + c).collect();
        let g = extract_features(&shifted).unwrap();
        let tol = |a: f64| 1e-8 * a.abs().max(1.0) * (1.0 + c.abs());
        for name in ["mean", "quantile_0.1", "quantile_0.25", "quantile_0.5", "quantile_0.75", "quantile_0.9"] {
            let (a, b) = (f.get(name).unwrap(), g.get(name).unwrap());
            prop_assert!((b - a - c).abs() <= tol(a), "{name}: {a} -> {b}");
        }
        for name in ["variance", "acf_1", "acf_2", "acf_3", "acf_6", "acf_12", "acf_24", "trend_slope"] {
            let (a, b) = (f.get(name).unwrap(), g.get(name).unwrap());
            prop_assert!((b - a).abs() <= tol(a), "{name}: {a} vs {b}");
        }
        prop_assert!((binned_entropy(&x) - binned_entropy(&shifted)).abs() <= 1e-9);
    }

    #[test]
    fn extraction_is_deterministic_and_finite(x in series()) {
        let a = extract_features(&x).unwrap();
        let b = extract_features(&x).unwrap();
        prop_assert_eq!(a.as_slice().len(), N_FEATURES);
        prop_assert!(a.as_slice().iter().zip(b.as_slice()).all(|(p, q)| p.to_bits() == q.to_bits()));
        prop_assert!(a.as_slice().iter().all(|v| v.is_finite()));
    }
}

#[test]
fn white_noise_autocorrelations_are_small() {
    let n = 10_000;
    let x = common::normals(&mut common::rng(3), n);
    let bound = 2.0 / (n as f64).sqrt() * 1.5;
    for lag in [1, 2, 3, 6, 12, 24] {
        let r = autocorrelation(&x, lag);
        assert!(r.abs() < bound, "lag {lag}: {r}");
    }
}

#[test]
fn feature_names_are_pinned() {
    assert_eq!(FEATURE_NAMES.len(), 25);
    assert_eq!(FEATURE_NAMES[0], "mean");
    assert_eq!(FEATURE_NAMES[24], "longest_zero_run");
}
