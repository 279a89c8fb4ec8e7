//! Slope-homogeneity testing across stations and year-over-year profile
//! correlation.

use std::collections::BTreeMap;
use std::path::Path;

use chrono::{Datelike, NaiveDateTime, Timelike};
use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::panel::PanelSeries;
use crate::stats::pearson;

/// One-sided 5% critical value of the standard normal.
pub const CRITICAL_5PCT: f64 = 1.645;

/// Degrees of freedom subtracted from each `d̃_i`. The within transform
/// annihilates the intercept, so only the slope carries information and a
/// homogeneous panel gives `d̃_i ≈ χ²₁`.
pub const DEFAULT_DOF: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationFit {
    pub station: String,
    pub intercept: f64,
    pub slope: f64,
    pub sigma2: f64,
    pub d_tilde: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomogeneityResult {
    pub d_tilde: f64,
    /// The `k` used in the bias adjustment.
    pub k: f64,
    pub n_stations: usize,
    #[serde(rename = "T")]
    pub t: usize,
    pub pooled_slope: f64,
    pub per_station: Vec<StationFit>,
    /// Stations dropped for zero residual variance.
    pub excluded: Vec<String>,
    pub reject_at_5pct: bool,
}

impl HomogeneityResult {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Data(e.to_string()))
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n").map_err(|e| Error::io(path, e))
    }
}

/// `M v = v − mean(v)`.
pub fn within_transform(v: &[f64]) -> Vec<f64> {
    let m = v.iter().sum::<f64>() / v.len() as f64;
    v.iter().map(|x| x - m).collect()
}

struct Regression {
    intercept: f64,
    slope: f64,
    sigma2: f64,
    sxx: f64,
    sxy: f64,
}

/// Trend regression of `y` on `(1, t)` with `t = 1..=T`, estimated on the
/// within-transformed data.
fn trend_regression(y: &[f64]) -> Regression {
    let n = y.len();
    let tn = n as f64;
    let tbar = (tn + 1.0) / 2.0;
    let ybar = y.iter().sum::<f64>() / tn;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, v) in y.iter().enumerate() {
        let dt = (i + 1) as f64 - tbar;
        sxy += dt * (v - ybar);
        sxx += dt * dt;
    }
    let slope = sxy / sxx;
    let rss: f64 = y
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let e = (v - ybar) - slope * ((i + 1) as f64 - tbar);
            e * e
        })
        .sum();
    Regression {
        intercept: ybar - slope * tbar,
        slope,
        sigma2: rss / (tn - 2.0),
        sxx,
        sxy,
    }
}

pub fn slope_homogeneity(panel: &PanelSeries) -> Result<HomogeneityResult> {
    slope_homogeneity_with_dof(panel, DEFAULT_DOF)
}

pub fn slope_homogeneity_with_dof(panel: &PanelSeries, k: f64) -> Result<HomogeneityResult> {
    if !(k > 0.0) {
        return Err(Error::InvalidParameter(format!("k must be positive, got {k}")));
    }
    let t = panel.n_hours();
    if t < 4 {
        return Err(Error::TooShort { required: 4, actual: t });
    }
    let fits: Vec<Regression> = (0..panel.n_stations())
        .into_par_iter()
        .map(|i| trend_regression(panel.series(i)))
        .collect();

    let mut kept = Vec::new();
    let mut excluded = Vec::new();
    for (i, f) in fits.into_iter().enumerate() {
        let y = panel.series(i);
        let scale = y.iter().map(|v| v * v).sum::<f64>() / t as f64;
        if f.sigma2 <= 1e-24 * scale.max(1.0) {
            warn!("station {} has zero residual variance; excluded", panel.stations()[i]);
            excluded.push(panel.stations()[i].clone());
        } else {
            kept.push((i, f));
        }
    }
    if kept.is_empty() {
        return Err(Error::Data("no station has residual variation".into()));
    }
    let num: f64 = kept.iter().map(|(_, f)| f.sxy / f.sigma2).sum();
    let den: f64 = kept.iter().map(|(_, f)| f.sxx / f.sigma2).sum();
    let pooled = num / den;

    let per_station: Vec<StationFit> = kept
        .iter()
        .map(|(i, f)| StationFit {
            station: panel.stations()[*i].clone(),
            intercept: f.intercept,
            slope: f.slope,
            sigma2: f.sigma2,
            d_tilde: (f.slope - pooled).powi(2) * f.sxx / f.sigma2,
        })
        .collect();
    let n = per_station.len();
    let d_tilde = per_station.iter().map(|s| (s.d_tilde - k) / (2.0 * k).sqrt()).sum::<f64>() / (n as f64).sqrt();
    if !d_tilde.is_finite() {
        return Err(Error::Numerical("homogeneity statistic is not finite".into()));
    }
    Ok(HomogeneityResult {
        d_tilde,
        k,
        n_stations: n,
        t,
        pooled_slope: pooled,
        per_station,
        excluded,
        reject_at_5pct: d_tilde > CRITICAL_5PCT,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileCorrelation {
    pub r: f64,
    pub n_keys: usize,
}

type ProfileKey = (u32, u32, u32);

fn profile(panel: &PanelSeries, from: usize, to: usize) -> BTreeMap<ProfileKey, f64> {
    let mut acc: BTreeMap<ProfileKey, (f64, usize)> = BTreeMap::new();
    let n = panel.n_stations() as f64;
    for h in from..to {
        let ts: NaiveDateTime = panel.hour(h);
        if ts.month() == 2 && ts.day() == 29 {
            continue;
        }
        let m = panel.values().iter().map(|s| s[h]).sum::<f64>() / n;
        let e = acc.entry((ts.month(), ts.day(), ts.hour())).or_insert((0.0, 0));
        e.0 += m;
        e.1 += 1;
    }
    acc.into_iter().map(|(k, (s, c))| (k, s / c as f64)).collect()
}

/// Pearson correlation of the network-mean demand profiles before and after
/// `boundary`, aligned on month-day-hour.
pub fn pearson_profile_correlation(panel: &PanelSeries, boundary: NaiveDateTime) -> Result<ProfileCorrelation> {
    let b = panel.boundary_index(boundary)?;
    let first = profile(panel, 0, b);
    let second = profile(panel, b, panel.n_hours());
    let (xs, ys): (Vec<f64>, Vec<f64>) = first
        .iter()
        .filter_map(|(k, v)| second.get(k).map(|w| (*v, *w)))
        .unzip();
    if xs.len() < 3 {
        return Err(Error::Data(format!(
            "only {} month-day-hour keys appear in both periods",
            xs.len()
        )));
    }
    let r = pearson(&xs, &ys).ok_or_else(|| Error::Numerical("a period profile is constant".into()))?;
    Ok(ProfileCorrelation { r, n_keys: xs.len() })
}
