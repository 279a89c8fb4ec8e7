//! Fixed summary-statistic vector per station series.

use std::path::Path;

use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::panel::PanelSeries;
use crate::stats::{mean, quantile_sorted};

pub const FEATURE_SET_VERSION: &str = "ts25-v1";
pub const MIN_SERIES_LEN: usize = 48;
pub const N_FEATURES: usize = 25;

pub const ACF_LAGS: [usize; 6] = [1, 2, 3, 6, 12, 24];
pub const QUANTILES: [f64; 5] = [0.1, 0.25, 0.5, 0.75, 0.9];
pub const ENTROPY_BINS: usize = 10;
pub const FFT_TOP: usize = 5;

pub const FEATURE_NAMES: [&str; N_FEATURES] = [
    "mean",
    "variance",
    "skewness",
    "kurtosis",
    "acf_1",
    "acf_2",
    "acf_3",
    "acf_6",
    "acf_12",
    "acf_24",
    "quantile_0.1",
    "quantile_0.25",
    "quantile_0.5",
    "quantile_0.75",
    "quantile_0.9",
    "binned_entropy",
    "fft_abs_1",
    "fft_abs_2",
    "fft_abs_3",
    "fft_abs_4",
    "fft_abs_5",
    "fft_dominant_index",
    "trend_slope",
    "count_above_mean_ratio",
    "longest_zero_run",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureVector(pub [f64; N_FEATURES]);

impl FeatureVector {
    pub fn get(&self, name: &str) -> Option<f64> {
        FEATURE_NAMES.iter().position(|n| *n == name).map(|i| self.0[i])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Autocorrelation at `lag`, normalized by `(n − lag) σ²`; zero for a
/// constant series.
pub fn autocorrelation(x: &[f64], lag: usize) -> f64 {
    let n = x.len();
    if lag >= n {
        return 0.0;
    }
    let m = mean(x);
    let var = x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / n as f64;
    if var == 0.0 {
        return 0.0;
    }
    let s: f64 = x[..n - lag].iter().zip(&x[lag..]).map(|(a, b)| (a - m) * (b - m)).sum();
    s / ((n - lag) as f64 * var)
}

/// Shannon entropy (nats) of a 10-bin equal-width histogram over `[min, max]`.
pub fn binned_entropy(x: &[f64]) -> f64 {
    let (lo, hi) = x
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if !(hi > lo) {
        return 0.0;
    }
    let width = (hi - lo) / ENTROPY_BINS as f64;
    let mut counts = [0usize; ENTROPY_BINS];
    for &v in x {
        let b = (((v - lo) / width) as usize).min(ENTROPY_BINS - 1);
        counts[b] += 1;
    }
    let n = x.len() as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// `|X_k|` for `k = 1..=n/2`. Magnitudes at rounding level relative to
/// `Σ|x|` are reported as exactly zero.
pub fn fft_magnitudes(x: &[f64]) -> Vec<f64> {
    let mut buf: Vec<Complex<f64>> = x.iter().map(|&v| Complex::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(buf.len()).process(&mut buf);
    let floor = 1e-10 * x.iter().map(|v| v.abs()).sum::<f64>();
    buf[1..=x.len() / 2]
        .iter()
        .map(|c| c.norm())
        .map(|m| if m <= floor { 0.0 } else { m })
        .collect()
}

fn longest_zero_run(x: &[f64]) -> usize {
    let mut best = 0;
    let mut run = 0;
    for &v in x {
        if v == 0.0 {
            run += 1;
            best = best.max(run);
        } else {
            run = 0;
        }
    }
    best
}

fn trend_slope(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let tm = (n - 1.0) / 2.0;
    let m = mean(x);
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (t, v) in x.iter().enumerate() {
        let dt = t as f64 - tm;
        sxy += dt * (v - m);
        sxx += dt * dt;
    }
    sxy / sxx
}

pub fn extract_features(x: &[f64]) -> Result<FeatureVector> {
    if x.len() < MIN_SERIES_LEN {
        return Err(Error::TooShort {
            required: MIN_SERIES_LEN,
            actual: x.len(),
        });
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Data("series has non-finite values".into()));
    }
    let n = x.len() as f64;
    let m = mean(x);
    let moment = |k: i32| x.iter().map(|v| (v - m).powi(k)).sum::<f64>() / n;
    let m2 = moment(2);
    let (skew, kurt) = if m2 > 0.0 {
        (moment(3) / m2.powf(1.5), moment(4) / (m2 * m2) - 3.0)
    } else {
        (0.0, 0.0)
    };

    let mut sorted = x.to_vec();
    sorted.sort_by(f64::total_cmp);

    let mags = fft_magnitudes(x);
    let mut order: Vec<usize> = (0..mags.len()).collect();
    order.sort_by(|&a, &b| mags[b].total_cmp(&mags[a]).then(a.cmp(&b)));
    let top = |i: usize| order.get(i).map_or(0.0, |&k| mags[k]);
    let dominant = match order.first() {
        Some(&k) if mags[k] > 0.0 => (k + 1) as f64,
        _ => 0.0,
    };

    let mut v = Vec::with_capacity(N_FEATURES);
    v.extend([m, m2, skew, kurt]);
    v.extend(ACF_LAGS.iter().map(|&l| autocorrelation(x, l)));
    v.extend(QUANTILES.iter().map(|&q| quantile_sorted(&sorted, q)));
    v.push(binned_entropy(x));
    v.extend((0..FFT_TOP).map(top));
    v.push(dominant);
    v.push(trend_slope(x));
    v.push(x.iter().filter(|&&a| a > m).count() as f64 / n);
    v.push(longest_zero_run(x) as f64);
    let arr: [f64; N_FEATURES] = v.try_into().expect("feature count is fixed");
    if let Some(i) = arr.iter().position(|f| !f.is_finite()) {
        return Err(Error::Numerical(format!("feature {} is not finite", FEATURE_NAMES[i])));
    }
    Ok(FeatureVector(arr))
}

/// Station × feature table.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTable {
    pub stations: Vec<String>,
    pub names: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl FeatureTable {
    pub fn n_stations(&self) -> usize {
        self.stations.len()
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).map_err(|e| Error::io(path, e.into()))?;
        let mut header = vec!["station_id".to_string()];
        header.extend(self.names.iter().cloned());
        w.write_record(&header).map_err(|e| Error::io(path, e.into()))?;
        for (s, row) in self.stations.iter().zip(&self.rows) {
            let mut rec = vec![s.clone()];
            rec.extend(row.iter().map(|v| v.to_string()));
            w.write_record(&rec).map_err(|e| Error::io(path, e.into()))?;
        }
        w.flush().map_err(|e| Error::io(path, e))
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let mut r = csv::Reader::from_path(path).map_err(|e| Error::parse(path, 1, e.to_string()))?;
        let header = r.headers().map_err(|e| Error::parse(path, 1, e.to_string()))?.clone();
        if header.len() < 2 || &header[0] != "station_id" {
            return Err(Error::parse(path, 1, "expected station_id followed by feature columns"));
        }
        let names: Vec<String> = header.iter().skip(1).map(String::from).collect();
        let (mut stations, mut rows) = (Vec::new(), Vec::new());
        for rec in r.records() {
            let rec = rec.map_err(|e| Error::parse(path, 0, e.to_string()))?;
            let line = rec.position().map_or(0, |p| p.line());
            let row = rec
                .iter()
                .skip(1)
                .map(|f| f.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::parse(path, line, e.to_string()))?;
            if row.len() != names.len() {
                return Err(Error::parse(path, line, "row width differs from header"));
            }
            stations.push(rec[0].to_string());
            rows.push(row);
        }
        if stations.is_empty() {
            return Err(Error::EmptyInput(format!("{} has no stations", path.display())));
        }
        Ok(Self { stations, names, rows })
    }
}

/// Features for every station, with static covariates appended when the
/// panel carries them. A station without covariates takes the mean of the
/// stations that have them.
pub fn extract_panel_features(panel: &PanelSeries) -> Result<FeatureTable> {
    let base = (0..panel.n_stations())
        .into_par_iter()
        .map(|i| {
            extract_features(panel.series(i)).map_err(|e| match e {
                Error::TooShort { .. } => e,
                other => Error::Data(format!("station {}: {other}", panel.stations()[i])),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut names: Vec<String> = FEATURE_NAMES.iter().map(|s| s.to_string()).collect();
    let mut rows: Vec<Vec<f64>> = base.iter().map(|f| f.0.to_vec()).collect();

    if let Some(cov) = panel.static_covariates() {
        let width = cov.names.len();
        let present: Vec<&Vec<f64>> = cov.values.iter().flatten().collect();
        let fill: Vec<f64> = (0..width)
            .map(|j| {
                if present.is_empty() {
                    0.0
                } else {
                    present.iter().map(|r| r[j]).sum::<f64>() / present.len() as f64
                }
            })
            .collect();
        names.extend(cov.names.iter().cloned());
        for (row, v) in rows.iter_mut().zip(&cov.values) {
            row.extend_from_slice(v.as_deref().unwrap_or(&fill));
        }
    }
    Ok(FeatureTable {
        stations: panel.stations().to_vec(),
        names,
        rows,
    })
}
