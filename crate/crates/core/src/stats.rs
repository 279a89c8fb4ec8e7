//! Small descriptive-statistics helpers shared across modules.

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Population (1/n) variance.
pub fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64
}

/// Sample (1/(n-1)) standard deviation; zero for fewer than two values.
pub fn sample_std(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

/// Linear-interpolation quantile (Hyndman-Fan type 7) of unsorted data.
pub fn quantile_type7(xs: &[f64], q: f64) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    quantile_sorted(&v, q)
}

/// Type-7 quantile of already sorted data.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of empty slice");
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

/// Inverse empirical CDF (type 1): the `ceil(n q)`-th order statistic.
///
/// This point minimizes the summed pinball loss at level `q`. Reorders `xs`.
pub fn quantile_inverse_cdf(xs: &mut [f64], q: f64) -> f64 {
    assert!(!xs.is_empty(), "quantile of empty slice");
    let n = xs.len();
    let k = ((n as f64 * q).ceil() as usize).clamp(1, n);
    let (_, kth, _) = xs.select_nth_unstable_by(k - 1, f64::total_cmp);
    *kth
}

/// Center of the set of minimizers of `Σ ρ_q(x_i − c)` over `c`.
///
/// The minimizer is the `ceil(n q)`-th order statistic unless `n q` is an
/// integer `k`, in which case every point of `[x_(k), x_(k+1)]` is optimal
/// and the midpoint is returned. Reorders `xs`.
pub fn pinball_center(xs: &mut [f64], q: f64) -> f64 {
    assert!(!xs.is_empty(), "quantile of empty slice");
    let n = xs.len();
    let nq = n as f64 * q;
    let k = nq.round();
    if (nq - k).abs() > 1e-9 * n as f64 || k < 1.0 || k >= n as f64 {
        return quantile_inverse_cdf(xs, q);
    }
    let k = k as usize;
    let (lo_part, kth, _) = xs.select_nth_unstable_by(k, f64::total_cmp);
    let upper = *kth;
    let lower = lo_part.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    0.5 * (lower + upper)
}

pub fn median(xs: &[f64]) -> f64 {
    quantile_type7(xs, 0.5)
}

/// Pearson correlation; `None` when either side has zero variance.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    assert_eq!(x.len(), y.len());
    let mx = mean(x);
    let my = mean(y);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type7_matches_hand_values() {
        let xs = [3.0, 1.0, 2.0, 4.0];
        assert_eq!(quantile_type7(&xs, 0.0), 1.0);
        assert_eq!(quantile_type7(&xs, 1.0), 4.0);
        assert_eq!(quantile_type7(&xs, 0.5), 2.5);
        assert!((quantile_type7(&xs, 0.25) - 1.75).abs() < 1e-15);
    }

    #[test]
    fn inverse_cdf_is_order_statistic() {
        let mut xs = [5.0, 1.0, 4.0, 2.0, 3.0];
        assert_eq!(quantile_inverse_cdf(&mut xs, 0.5), 3.0);
        assert_eq!(quantile_inverse_cdf(&mut xs, 0.01), 1.0);
        assert_eq!(quantile_inverse_cdf(&mut xs, 0.99), 5.0);
        assert_eq!(quantile_inverse_cdf(&mut xs, 0.4), 2.0);
    }

    #[test]
    fn pinball_center_minimizes() {
        let mut xs = [1.0, 3.0, 1.0, 3.0];
        assert_eq!(pinball_center(&mut xs, 0.5), 2.0);
        let mut xs = [5.0, 1.0, 4.0, 2.0, 3.0];
        assert_eq!(pinball_center(&mut xs, 0.5), 3.0);
        let mut xs = [5.0, 1.0, 4.0, 2.0];
        assert_eq!(pinball_center(&mut xs, 0.25), 1.5);
        assert_eq!(pinball_center(&mut [7.0], 0.975), 7.0);
    }

    #[test]
    fn pearson_edge_cases() {
        assert_eq!(pearson(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]), Some(1.0));
        assert_eq!(pearson(&[1.0, 2.0, 3.0], &[1.0, 1.0, 1.0]), None);
    }

    proptest::proptest! {
        #[test]
        fn pinball_center_beats_every_sample(xs in proptest::collection::vec(-50.0f64..50.0, 1..40), q in 0.01f64..0.99) {
            let loss = |c: f64| xs.iter().map(|&x| {
                let u = x - c;
                if u >= 0.0 { q * u } else { (q - 1.0) * u }
            }).sum::<f64>();
            let c = pinball_center(&mut xs.clone(), q);
            for &x in &xs {
                proptest::prop_assert!(loss(c) <= loss(x) + 1e-9);
            }
        }
    }
}
