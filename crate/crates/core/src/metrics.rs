//! Coverage, width and accuracy of interval forecasts.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Aligned interval forecasts and observations.
#[derive(Debug, Clone, PartialEq)]
pub struct ForecastTriplet {
    lower: Vec<f64>,
    median: Vec<f64>,
    upper: Vec<f64>,
    y: Vec<f64>,
}

impl ForecastTriplet {
    pub fn new(lower: Vec<f64>, median: Vec<f64>, upper: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let n = y.len();
        if n == 0 {
            return Err(Error::EmptyInput("no forecasts to evaluate".into()));
        }
        if lower.len() != n || median.len() != n || upper.len() != n {
            return Err(Error::Shape(format!(
                "lengths lower {}, median {}, upper {}, y {n}",
                lower.len(),
                median.len(),
                upper.len()
            )));
        }
        if [&lower, &median, &upper, &y].iter().any(|v| v.iter().any(|x| !x.is_finite())) {
            return Err(Error::Data("non-finite forecast or observation".into()));
        }
        Ok(Self { lower, median, upper, y })
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn median(&self) -> &[f64] {
        &self.median
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// Rows `idx` as a new triplet.
    pub fn select(&self, idx: &[usize]) -> Result<Self> {
        let pick = |v: &[f64]| idx.iter().map(|&i| v[i]).collect::<Vec<_>>();
        Self::new(pick(&self.lower), pick(&self.median), pick(&self.upper), pick(&self.y))
    }

    pub fn concat(&self, other: &Self) -> Self {
        let join = |a: &[f64], b: &[f64]| a.iter().chain(b).copied().collect::<Vec<_>>();
        Self {
            lower: join(&self.lower, &other.lower),
            median: join(&self.median, &other.median),
            upper: join(&self.upper, &other.upper),
            y: join(&self.y, &other.y),
        }
    }
}

/// Fraction of observations inside `[lower, upper]`.
pub fn picp(t: &ForecastTriplet) -> f64 {
    let hits = t
        .y
        .iter()
        .zip(t.lower.iter().zip(&t.upper))
        .filter(|(y, (lo, hi))| *lo <= *y && *y <= *hi)
        .count();
    hits as f64 / t.len() as f64
}

/// Mean width `upper − lower` over the observed range of `y`.
pub fn pinaw(t: &ForecastTriplet) -> Result<f64> {
    let (lo, hi) = t
        .y
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let range = hi - lo;
    if !(range > 0.0) {
        return Err(Error::Data("observed range is zero; PINAW undefined".into()));
    }
    let width: f64 = t.upper.iter().zip(&t.lower).map(|(u, l)| u - l).sum();
    Ok(width / t.len() as f64 / range)
}

pub fn mse_median(t: &ForecastTriplet) -> f64 {
    t.y.iter().zip(&t.median).map(|(y, m)| (y - m) * (y - m)).sum::<f64>() / t.len() as f64
}

/// Fraction of rows with `upper < lower`.
pub fn crossing_rate(t: &ForecastTriplet) -> f64 {
    t.upper.iter().zip(&t.lower).filter(|(u, l)| u < l).count() as f64 / t.len() as f64
}

pub const REPORT_HEADER: &str = "dgp,scheme,scope,picp,pinaw,mse_median,crossing_rate,n";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalReport {
    pub dgp: String,
    pub scheme: String,
    pub scope: String,
    pub picp: f64,
    /// `None` when the observed range is zero.
    pub pinaw: Option<f64>,
    pub mse_median: f64,
    pub crossing_rate: f64,
    pub n: usize,
}

impl IntervalReport {
    pub fn evaluate(
        t: &ForecastTriplet,
        dgp: impl Into<String>,
        scheme: impl Into<String>,
        scope: impl Into<String>,
    ) -> Self {
        Self {
            dgp: dgp.into(),
            scheme: scheme.into(),
            scope: scope.into(),
            picp: picp(t),
            pinaw: pinaw(t).ok(),
            mse_median: mse_median(t),
            crossing_rate: crossing_rate(t),
            n: t.len(),
        }
    }

    pub fn csv_row(&self) -> String {
        let pinaw = self.pinaw.map_or_else(|| "NaN".to_string(), |v| v.to_string());
        format!(
            "{},{},{},{},{},{},{},{}",
            self.dgp, self.scheme, self.scope, self.picp, pinaw, self.mse_median, self.crossing_rate, self.n
        )
    }
}

pub fn write_reports(mut w: impl Write, reports: &[IntervalReport]) -> std::io::Result<()> {
    writeln!(w, "{REPORT_HEADER}")?;
    for r in reports {
        writeln!(w, "{}", r.csv_row())?;
    }
    Ok(())
}
