use serde::{Deserialize, Serialize};

use super::data::FeatureMatrix;
use super::forest::{train, QuantileForest, TrainParams};
use crate::error::Result;

/// Quantile levels of the 95% interval and its median.
pub const INTERVAL_QUANTILES: [f64; 3] = [0.025, 0.5, 0.975];

/// Three independently trained quantile forests sharing one design.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalModel {
    pub lower: QuantileForest,
    pub median: QuantileForest,
    pub upper: QuantileForest,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntervalPrediction {
    pub lower: Vec<f64>,
    pub median: Vec<f64>,
    pub upper: Vec<f64>,
}

/// Trains the lower, median and upper forests (in parallel; each is
/// deterministic on its own).
pub fn train_interval(features: &FeatureMatrix, target: &[f64], params: &TrainParams) -> Result<IntervalModel> {
    let [lo, mid, hi] = INTERVAL_QUANTILES;
    let (lower, (median, upper)) = rayon::join(
        || train(features, target, &params.with_quantile(lo)),
        || {
            rayon::join(
                || train(features, target, &params.with_quantile(mid)),
                || train(features, target, &params.with_quantile(hi)),
            )
        },
    );
    Ok(IntervalModel {
        lower: lower?,
        median: median?,
        upper: upper?,
    })
}

impl IntervalModel {
    pub fn predict(&self, features: &FeatureMatrix) -> Result<IntervalPrediction> {
        Ok(IntervalPrediction {
            lower: self.lower.predict(features)?,
            median: self.median.predict(features)?,
            upper: self.upper.predict(features)?,
        })
    }

    pub fn quantiles(&self) -> [f64; 3] {
        [self.lower.quantile(), self.median.quantile(), self.upper.quantile()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    #[test]
    fn gaussian_noise_gives_ordered_bands() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let normal = Normal::new(0.0, 1.0).unwrap();
        let n = 2000;
        let x: Vec<f64> = (0..n).map(|i| (i % 7) as f64).collect();
        let y: Vec<f64> = (0..n).map(|_| normal.sample(&mut rng)).collect();
        let fm = FeatureMatrix::from_columns(vec![x]).unwrap();
        let params = TrainParams {
            n_rounds: 100,
            num_leaves: 4,
            ..TrainParams::default()
        };
        let m = train_interval(&fm, &y, &params).unwrap();
        assert_eq!(m.quantiles(), INTERVAL_QUANTILES);
        let p = m.predict(&fm).unwrap();
        let ordered = (0..n)
            .filter(|&i| p.lower[i] < p.median[i] && p.median[i] < p.upper[i])
            .count();
        assert!(ordered as f64 >= 0.99 * n as f64);
    }

    #[test]
    fn deterministic_target_median_exact_tails_bracket() {
        let x: Vec<f64> = (0..200).map(|i| (i % 4) as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        let fm = FeatureMatrix::from_columns(vec![x]).unwrap();
        let params = TrainParams {
            n_rounds: 500,
            num_leaves: 4,
            min_samples_leaf: 5,
            ..TrainParams::default()
        };
        let p = train_interval(&fm, &y, &params).unwrap().predict(&fm).unwrap();
        for (i, &yi) in y.iter().enumerate() {
            assert!((p.median[i] - yi).abs() < 1e-6);
            assert!(p.lower[i] <= yi && yi <= p.upper[i]);
        }
    }
}
