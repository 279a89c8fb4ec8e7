use std::fmt;

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cluster::ClusterAssignment;
use crate::error::{Error, Result};
use crate::metrics::{ForecastTriplet, IntervalReport};
use crate::panel::{build_design_matrix, PanelSeries};
use crate::qboost::{train_interval, IntervalModel, TrainParams};
use crate::stats::{mean, quantile_type7, sample_std};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Global,
    Cluster,
    Station,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Global, Scheme::Cluster, Scheme::Station];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Global => "global",
            Scheme::Cluster => "cluster",
            Scheme::Station => "station",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown scheme {s:?} (global, cluster, station)")))
    }
}

/// Everything a scheme run needs besides the grouping.
#[derive(Debug, Clone, Copy)]
pub struct SchemeContext<'a> {
    pub panel: &'a PanelSeries,
    /// First test hour.
    pub boundary: usize,
    pub params: &'a TrainParams,
    pub dgp: &'a str,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub mean: f64,
    pub min: f64,
    pub median: f64,
    pub max: f64,
    /// Sample standard deviation (n − 1); zero for a single scope.
    pub std: f64,
}

impl MetricSummary {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        Some(Self {
            mean: mean(values),
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            median: quantile_type7(values, 0.5),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            std: sample_std(values),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeSummary {
    pub picp: Option<MetricSummary>,
    pub pinaw: Option<MetricSummary>,
    pub mse_median: Option<MetricSummary>,
    pub crossing_rate: Option<MetricSummary>,
}

impl SchemeSummary {
    pub fn of(reports: &[IntervalReport]) -> Self {
        let col = |f: fn(&IntervalReport) -> Option<f64>| {
            MetricSummary::of(&reports.iter().filter_map(f).collect::<Vec<_>>())
        };
        Self {
            picp: col(|r| Some(r.picp)),
            pinaw: col(|r| r.pinaw),
            mse_median: col(|r| Some(r.mse_median)),
            crossing_rate: col(|r| Some(r.crossing_rate)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeResult {
    pub scheme: Scheme,
    pub reports: Vec<IntervalReport>,
    /// Scopes skipped for too few training or test rows.
    pub degenerate: Vec<String>,
    pub summary: SchemeSummary,
}

/// Trained model and test-period forecasts for one group of stations.
#[derive(Debug, Clone)]
pub struct ScopeFit {
    pub model: IntervalModel,
    pub forecasts: ForecastTriplet,
}

/// Trains on hours before `boundary` of the stations `members` and forecasts
/// the rest one step ahead. `None` when the scope has too few rows.
pub fn fit_scope(panel: &PanelSeries, members: &[usize], boundary: usize, params: &TrainParams) -> Result<Option<ScopeFit>> {
    let sub = panel.select(members)?;
    let design = build_design_matrix(&sub)?;
    let (train, test) = design.split_at_hour(boundary);
    if train.n_rows() < 2 * params.min_samples_leaf.max(1) || test.n_rows() == 0 {
        return Ok(None);
    }
    let model = train_interval(&train.features, &train.target, params)?;
    let p = model.predict(&test.features)?;
    let forecasts = ForecastTriplet::new(p.lower, p.median, p.upper, test.target)?;
    Ok(Some(ScopeFit { model, forecasts }))
}

/// Runs one model per group; `scopes[i]` labels `groups[i]`.
pub fn run_groups(ctx: &SchemeContext, scheme: Scheme, groups: &[Vec<usize>], scopes: &[String]) -> Result<SchemeResult> {
    if ctx.boundary == 0 || ctx.boundary >= ctx.panel.n_hours() {
        return Err(Error::InvalidParameter(format!(
            "boundary hour {} outside 1..{}",
            ctx.boundary,
            ctx.panel.n_hours()
        )));
    }
    let fits = groups
        .par_iter()
        .map(|g| fit_scope(ctx.panel, g, ctx.boundary, ctx.params))
        .collect::<Result<Vec<_>>>()?;
    let mut reports = Vec::new();
    let mut degenerate = Vec::new();
    for (fit, scope) in fits.into_iter().zip(scopes) {
        match fit {
            Some(f) => reports.push(IntervalReport::evaluate(&f.forecasts, ctx.dgp, scheme.name(), scope.clone())),
            None => {
                warn!("{scheme} scope {scope} has too few rows; skipped");
                degenerate.push(scope.clone());
            }
        }
    }
    let summary = SchemeSummary::of(&reports);
    Ok(SchemeResult {
        scheme,
        reports,
        degenerate,
        summary,
    })
}

/// One model on all stations pooled.
pub fn run_global(ctx: &SchemeContext) -> Result<SchemeResult> {
    let all: Vec<usize> = (0..ctx.panel.n_stations()).collect();
    run_groups(ctx, Scheme::Global, &[all], &["global".to_string()])
}

/// One model per cluster of `assignment`, matched to the panel by station id.
pub fn run_cluster(ctx: &SchemeContext, assignment: &ClusterAssignment) -> Result<SchemeResult> {
    let mut groups = vec![Vec::new(); assignment.k];
    for (i, s) in ctx.panel.stations().iter().enumerate() {
        let l = assignment
            .label_of(s)
            .ok_or_else(|| Error::Data(format!("station {s} has no cluster assignment")))?;
        groups[l].push(i);
    }
    let scopes: Vec<String> = (0..assignment.k).map(|c| format!("cluster_{c}")).collect();
    let (groups, scopes): (Vec<_>, Vec<_>) = groups.into_iter().zip(scopes).filter(|(g, _)| !g.is_empty()).unzip();
    run_groups(ctx, Scheme::Cluster, &groups, &scopes)
}

/// One model per station.
pub fn run_station(ctx: &SchemeContext) -> Result<SchemeResult> {
    let groups: Vec<Vec<usize>> = (0..ctx.panel.n_stations()).map(|i| vec![i]).collect();
    run_groups(ctx, Scheme::Station, &groups, ctx.panel.stations())
}
