//! Histogram gradient-boosted decision trees for quantile regression.
//!
//! Each boosting round computes pinball-loss gradients (with a unit surrogate
//! hessian) at the current predictions, grows one tree leaf-wise using the
//! second-order gain
//! `½[G_L²/(H_L+λ) + G_R²/(H_R+λ) − G_P²/(H_P+λ)] − γ`, and adds it with
//! shrinkage. By default each leaf's output is then refit to the τ-quantile
//! of its rows' residuals, which makes the training loss non-increasing.

mod binning;
mod data;
mod forest;
mod histogram;
mod interval;
mod loss;
mod split;
mod tree;

pub use binning::{BinMapper, BinnedMatrix};
pub use data::{FeatureKind, FeatureMatrix, FeatureSchema};
pub use forest::{fit, train, LeafOutput, QuantileForest, TrainOutput, TrainParams, MODEL_FORMAT_VERSION};
pub use histogram::{build_histograms, BinStats, Histogram};
pub use interval::{train_interval, IntervalModel, IntervalPrediction, INTERVAL_QUANTILES};
pub use loss::{mean_pinball_loss, pinball_grad, pinball_loss, GradHess};
pub use split::{best_split, leaf_weight, split_gain, SplitCandidate, SplitParams, SplitRule, MAX_EXHAUSTIVE_CATEGORIES};
pub use tree::{grow_tree_leafwise, GrowParams, GrownTree, Node, SplitTest, Tree};
