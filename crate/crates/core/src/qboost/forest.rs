use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::binning::BinnedMatrix;
use super::data::{FeatureMatrix, FeatureSchema};
use super::loss::{mean_pinball_loss, GradHess};
use super::split::SplitParams;
use super::tree::{grow_tree_leafwise, GrowParams, Tree};
use crate::error::{Error, Result};
use crate::stats::{pinball_center, quantile_type7};

pub const MODEL_FORMAT_VERSION: u32 = 1;

/// How leaf outputs are set once a tree's structure is grown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LeafOutput {
    /// Keep the Newton weight `−G/(H+λ)`.
    Newton,
    /// Replace each leaf value by a minimizer of the pinball loss over the
    /// residuals of its training rows: the τ-quantile, or the midpoint of the
    /// minimizing interval when the minimizer is not unique.
    ResidualQuantile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainParams {
    pub learning_rate: f64,
    pub num_leaves: usize,
    pub n_rounds: usize,
    pub lambda_l2: f64,
    pub gamma_leaf: f64,
    pub max_bins: usize,
    pub min_samples_leaf: usize,
    pub quantile: f64,
    pub leaf_output: LeafOutput,
}

impl Default for TrainParams {
    fn default() -> Self {
        Self {
            learning_rate: 0.05,
            num_leaves: 64,
            n_rounds: 500,
            lambda_l2: 1.0,
            gamma_leaf: 0.0,
            max_bins: 255,
            min_samples_leaf: 20,
            quantile: 0.5,
            leaf_output: LeafOutput::ResidualQuantile,
        }
    }
}

impl TrainParams {
    pub fn with_quantile(&self, quantile: f64) -> Self {
        Self {
            quantile,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad(format!("learning_rate must be positive, got {}", self.learning_rate));
        }
        if self.num_leaves < 1 {
            return bad("num_leaves must be at least 1".into());
        }
        if !(self.lambda_l2 >= 0.0) || !(self.gamma_leaf >= 0.0) {
            return bad("lambda_l2 and gamma_leaf must be non-negative".into());
        }
        if self.max_bins < 2 {
            return bad("max_bins must be at least 2".into());
        }
        if self.min_samples_leaf < 1 {
            return bad("min_samples_leaf must be at least 1".into());
        }
        if !(self.quantile > 0.0 && self.quantile < 1.0) {
            return bad(format!("quantile must lie in (0, 1), got {}", self.quantile));
        }
        Ok(())
    }

    fn grow_params(&self) -> GrowParams {
        GrowParams {
            num_leaves: self.num_leaves,
            split: SplitParams {
                lambda_l2: self.lambda_l2,
                gamma_leaf: self.gamma_leaf,
                min_samples_leaf: self.min_samples_leaf,
            },
        }
    }
}

/// A boosted ensemble estimating one conditional quantile.
///
/// Prediction is `base_score` plus `learning_rate × tree output`, accumulated
/// tree by tree in training order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantileForest {
    pub format_version: u32,
    pub params: TrainParams,
    pub schema: FeatureSchema,
    pub feature_names: Vec<String>,
    pub base_score: f64,
    pub trees: Vec<Tree>,
}

/// Training by-products used for diagnostics and tests.
#[derive(Debug, Clone)]
pub struct TrainOutput {
    pub forest: QuantileForest,
    /// Mean training pinball loss at the base score and after every round.
    pub loss_history: Vec<f64>,
    /// Cached training predictions after the final round.
    pub train_predictions: Vec<f64>,
}

pub fn train(features: &FeatureMatrix, target: &[f64], params: &TrainParams) -> Result<QuantileForest> {
    fit(features, target, params).map(|o| o.forest)
}

/// Boosts `params.n_rounds` trees against the pinball loss at
/// `params.quantile`.
pub fn fit(features: &FeatureMatrix, target: &[f64], params: &TrainParams) -> Result<TrainOutput> {
    params.validate()?;
    let n = target.len();
    if n == 0 || features.n_rows() == 0 {
        return Err(Error::EmptyInput("training design has no rows".into()));
    }
    if features.n_rows() != n {
        return Err(Error::Shape(format!("{} feature rows, {n} targets", features.n_rows())));
    }
    if let Some(i) = target.iter().position(|v| !v.is_finite()) {
        return Err(Error::Data(format!("non-finite target at row {i}")));
    }
    if n < 2 * params.min_samples_leaf {
        return Err(Error::TooShort {
            required: 2 * params.min_samples_leaf,
            actual: n,
        });
    }
    features.check_codes_in_range()?;

    let tau = params.quantile;
    let binned = BinnedMatrix::new(features, params.max_bins);
    let kinds = features.schema().kinds().to_vec();
    let grow = params.grow_params();
    let base_score = quantile_type7(target, tau);
    let mut pred = vec![base_score; n];
    let mut loss_history = Vec::with_capacity(params.n_rounds + 1);
    loss_history.push(mean_pinball_loss(target, &pred, tau));
    let mut trees = Vec::with_capacity(params.n_rounds);
    let all_rows: Vec<u32> = (0..n as u32).collect();
    let mut residuals = Vec::new();

    for _ in 0..params.n_rounds {
        let gh = GradHess::pinball(target, &pred, tau);
        let mut grown = grow_tree_leafwise(&binned, all_rows.clone(), &gh, &kinds, &grow);
        if params.leaf_output == LeafOutput::ResidualQuantile {
            for (node, rows) in &grown.leaves {
                residuals.clear();
                residuals.extend(rows.iter().map(|&r| target[r as usize] - pred[r as usize]));
                let q = pinball_center(&mut residuals, tau);
                grown.tree.set_leaf_value(*node, q);
            }
        }
        let mut all_zero = true;
        for (node, rows) in &grown.leaves {
            let v = match &grown.tree.nodes[*node] {
                super::tree::Node::Leaf { value } => *value,
                _ => unreachable!("leaf list holds leaves"),
            };
            if v != 0.0 {
                all_zero = false;
            }
            let step = params.learning_rate * v;
            for &r in rows {
                pred[r as usize] += step;
            }
        }
        trees.push(grown.tree);
        loss_history.push(mean_pinball_loss(target, &pred, tau));
        if all_zero {
            break;
        }
    }

    Ok(TrainOutput {
        forest: QuantileForest {
            format_version: MODEL_FORMAT_VERSION,
            params: params.clone(),
            schema: features.schema().clone(),
            feature_names: features.names().to_vec(),
            base_score,
            trees,
        },
        loss_history,
        train_predictions: pred,
    })
}

impl QuantileForest {
    pub fn quantile(&self) -> f64 {
        self.params.quantile
    }

    pub fn predict(&self, features: &FeatureMatrix) -> Result<Vec<f64>> {
        if features.schema() != &self.schema {
            return Err(Error::Shape(format!(
                "prediction schema has {} columns, model expects {}",
                features.n_features(),
                self.schema.len()
            )));
        }
        let lr = self.params.learning_rate;
        Ok((0..features.n_rows())
            .map(|i| {
                let mut p = self.base_score;
                for t in &self.trees {
                    p += lr * t.predict_with(|j| features.value(i, j));
                }
                p
            })
            .collect())
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string(self).map_err(|e| Error::Data(format!("serializing model: {e}")))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let m: Self = serde_json::from_str(s).map_err(|e| Error::Data(format!("parsing model: {e}")))?;
        if m.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::Data(format!(
                "unsupported model format version {}",
                m.format_version
            )));
        }
        Ok(m)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qboost::data::FeatureKind;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn small(params: TrainParams) -> TrainParams {
        TrainParams {
            min_samples_leaf: 2,
            ..params
        }
    }

    #[test]
    fn constant_target_is_exact() {
        let fm = FeatureMatrix::from_columns(vec![(0..50).map(f64::from).collect()]).unwrap();
        let y = vec![4.25; 50];
        for tau in [0.025, 0.5, 0.975] {
            let out = fit(&fm, &y, &small(TrainParams::default()).with_quantile(tau)).unwrap();
            assert_eq!(out.forest.base_score, 4.25);
            assert!(out.forest.predict(&fm).unwrap().iter().all(|&p| p == 4.25));
        }
    }

    #[test]
    fn empty_forest_predicts_base_score() {
        let fm = FeatureMatrix::from_columns(vec![vec![1.0, 2.0, 3.0, 4.0]]).unwrap();
        let params = TrainParams {
            n_rounds: 0,
            min_samples_leaf: 1,
            ..TrainParams::default()
        };
        let f = train(&fm, &[1.0, 2.0, 3.0, 4.0], &params).unwrap();
        assert!(f.trees.is_empty());
        assert_eq!(f.predict(&fm).unwrap(), vec![2.5; 4]);
    }

    #[test]
    fn separable_median_converges() {
        let x: Vec<f64> = (0..40).map(|i| (i % 2) as f64).collect();
        let y: Vec<f64> = x.iter().map(|&v| v * 10.0).collect();
        let fm = FeatureMatrix::from_columns(vec![x.clone()]).unwrap();
        let f = train(&fm, &y, &small(TrainParams::default())).unwrap();
        let p = f.predict(&fm).unwrap();
        for (pi, yi) in p.iter().zip(&y) {
            assert!((pi - yi).abs() < 1e-3, "{pi} vs {yi}");
        }
    }

    #[test]
    fn cached_predictions_match_recomputed() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 300;
        let x1: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..10.0)).collect();
        let x2: Vec<f64> = (0..n).map(|_| rng.random_range(0..5) as f64).collect();
        let y: Vec<f64> = x1
            .iter()
            .zip(&x2)
            .map(|(a, b)| a.sin() + b + rng.random_range(-0.5..0.5))
            .collect();
        let fm = FeatureMatrix::new(
            vec![x1, x2],
            vec!["a".into(), "b".into()],
            FeatureSchema::new(vec![FeatureKind::Numeric, FeatureKind::Categorical { cardinality: 5 }]),
        )
        .unwrap();
        let params = TrainParams {
            n_rounds: 60,
            num_leaves: 8,
            min_samples_leaf: 5,
            quantile: 0.8,
            ..TrainParams::default()
        };
        let out = fit(&fm, &y, &params).unwrap();
        assert_eq!(out.forest.predict(&fm).unwrap(), out.train_predictions);
        for w in out.loss_history.windows(2) {
            assert!(w[1] <= w[0] + 1e-9);
        }
    }

    #[test]
    fn json_round_trip_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x: Vec<f64> = (0..200).map(|_| rng.random::<f64>()).collect();
        let y: Vec<f64> = x.iter().map(|v| v * 3.0 + rng.random::<f64>()).collect();
        let fm = FeatureMatrix::from_columns(vec![x]).unwrap();
        let params = TrainParams {
            n_rounds: 20,
            num_leaves: 6,
            ..TrainParams::default()
        };
        let f = train(&fm, &y, &params).unwrap();
        let back = QuantileForest::from_json(&f.to_json().unwrap()).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.predict(&fm).unwrap(), f.predict(&fm).unwrap());
    }

    #[test]
    fn rejects_bad_inputs() {
        let fm = FeatureMatrix::from_columns(vec![vec![1.0, 2.0]]).unwrap();
        let p = small(TrainParams::default());
        assert!(matches!(train(&fm, &[1.0, f64::NAN], &p), Err(Error::Data(_))));
        let empty = FeatureMatrix::from_columns(vec![vec![]]).unwrap();
        assert!(matches!(train(&empty, &[], &p), Err(Error::EmptyInput(_))));
        let bad_tau = TrainParams { quantile: 1.0, ..p.clone() };
        assert!(matches!(train(&fm, &[1.0, 2.0], &bad_tau), Err(Error::InvalidParameter(_))));
        let f = train(&fm, &[1.0, 2.0], &TrainParams { min_samples_leaf: 1, ..p }).unwrap();
        let wide = FeatureMatrix::from_columns(vec![vec![1.0], vec![2.0]]).unwrap();
        assert!(matches!(f.predict(&wide), Err(Error::Shape(_))));
    }

    #[test]
    fn unseen_category_goes_to_larger_child() {
        // Codes 0 and 1 only; code 1 is the majority.
        let codes: Vec<f64> = (0..30).map(|i| if i < 10 { 0.0 } else { 1.0 }).collect();
        let y: Vec<f64> = codes
            .iter()
            .enumerate()
            .map(|(i, &c)| if c == 0.0 { -5.0 - 0.01 * i as f64 } else { 5.0 + 0.01 * i as f64 })
            .collect();
        let fm = FeatureMatrix::new(
            vec![codes],
            vec!["c".into()],
            FeatureSchema::new(vec![FeatureKind::Categorical { cardinality: 3 }]),
        )
        .unwrap();
        let params = TrainParams {
            n_rounds: 200,
            num_leaves: 2,
            min_samples_leaf: 1,
            ..TrainParams::default()
        };
        let f = train(&fm, &y, &params).unwrap();
        let probe = FeatureMatrix::new(
            vec![vec![0.0, 1.0, 2.0]],
            vec!["c".into()],
            FeatureSchema::new(vec![FeatureKind::Categorical { cardinality: 3 }]),
        )
        .unwrap();
        let p = f.predict(&probe).unwrap();
        assert!(p[0] < -4.9 && p[0] > -5.1);
        assert!(p[1] > 5.0 && p[1] < 5.3);
        assert_eq!(p[2], p[1]);
    }
}
