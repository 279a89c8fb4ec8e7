//! Pooled probabilistic forecasting of hourly demand across many stations.
//!
//! The crate covers the full path from raw event logs to interval metrics:
//! hourly panel construction ([`panel`]), synthetic panels from four
//! generating processes ([`dgp`]), quantile gradient boosting ([`qboost`]),
//! per-station time-series features ([`features`]), station clustering
//! ([`cluster`]), homogeneity diagnostics ([`homogeneity`]), interval
//! metrics ([`metrics`]) and the experiment driver ([`harness`]).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod stats;
pub mod panel;
pub mod dgp;
pub mod qboost;
pub mod features;
pub mod cluster;
pub mod homogeneity;
pub mod metrics;
pub mod harness;

pub use error::{Error, Result};
