//! Synthetic hourly demand from four data-generating processes.
//!
//! Every station of a simulated panel shares one parameter vector and differs
//! only in its starting level and its random stream.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::NaiveDateTime;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, StudentT};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::panel::PanelSeries;

pub const DEFAULT_BURN_IN: usize = 500;

/// Seasonal ARMA recursion (no differencing).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SarimaSpec {
    pub mu: f64,
    #[serde(default)]
    pub phi: Vec<f64>,
    #[serde(default)]
    pub theta: Vec<f64>,
    #[serde(default)]
    pub seasonal_phi: Vec<f64>,
    #[serde(default)]
    pub seasonal_theta: Vec<f64>,
    /// Seasonal period in hours.
    pub period: usize,
    pub sigma2: f64,
}

/// Autoregression on an arbitrary lag set with unit-variance Student-t
/// innovations scaled by `sigma`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArTSpec {
    pub mu: f64,
    pub lags: Vec<usize>,
    pub phi: Vec<f64>,
    pub sigma: f64,
    pub nu: f64,
}

/// Two-hidden-layer tanh network on the last `p` values plus Gaussian noise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpArSpec {
    pub p: usize,
    /// `h1 × p`
    pub w1: Vec<Vec<f64>>,
    pub b1: Vec<f64>,
    /// `h2 × h1`
    pub w2: Vec<Vec<f64>>,
    pub b2: Vec<f64>,
    /// `h2`
    pub w3: Vec<f64>,
    pub b3: f64,
    pub sigma: f64,
}

/// AR mean with GARCH conditional variance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArGarchSpec {
    pub mu: f64,
    pub phi: Vec<f64>,
    pub omega: f64,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DgpSpec {
    Sarima(SarimaSpec),
    ArHeavyTail(ArTSpec),
    MlpAr(MlpArSpec),
    ArGarch(ArGarchSpec),
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

fn all_finite(xs: &[f64]) -> bool {
    xs.iter().all(|x| x.is_finite())
}

impl SarimaSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma2 >= 0.0 && self.sigma2.is_finite()) {
            return Err(invalid(format!("sigma2 must be non-negative, got {}", self.sigma2)));
        }
        if (!self.seasonal_phi.is_empty() || !self.seasonal_theta.is_empty()) && self.period == 0 {
            return Err(invalid("seasonal terms need a positive period"));
        }
        if !self.mu.is_finite()
            || ![&self.phi, &self.theta, &self.seasonal_phi, &self.seasonal_theta]
                .iter()
                .all(|v| all_finite(v))
        {
            return Err(invalid("SARIMA coefficients must be finite"));
        }
        Ok(())
    }

    fn ar_span(&self) -> usize {
        self.phi.len().max(self.seasonal_phi.len() * self.period)
    }

    fn ma_span(&self) -> usize {
        self.theta.len().max(self.seasonal_theta.len() * self.period)
    }
}

impl ArTSpec {
    pub fn validate(&self) -> Result<()> {
        if self.lags.len() != self.phi.len() {
            return Err(invalid(format!(
                "{} lags but {} coefficients",
                self.lags.len(),
                self.phi.len()
            )));
        }
        if self.lags.contains(&0) {
            return Err(invalid("lags must be positive"));
        }
        if !(self.nu > 2.0) {
            return Err(invalid(format!("Student-t degrees of freedom must exceed 2, got {}", self.nu)));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) || !self.mu.is_finite() || !all_finite(&self.phi) {
            return Err(invalid("AR-t parameters must be finite with sigma >= 0"));
        }
        Ok(())
    }

    /// Plain AR(p) on lags `1..=p`.
    pub fn ar(mu: f64, phi: Vec<f64>, sigma: f64, nu: f64) -> Self {
        Self {
            mu,
            lags: (1..=phi.len()).collect(),
            phi,
            sigma,
            nu,
        }
    }
}

impl MlpArSpec {
    pub fn hidden(&self) -> (usize, usize) {
        (self.b1.len(), self.b2.len())
    }

    pub fn validate(&self) -> Result<()> {
        let (h1, h2) = self.hidden();
        if self.p == 0 || h1 == 0 || h2 == 0 {
            return Err(invalid("MLP-AR needs p, h1, h2 >= 1"));
        }
        if self.w1.len() != h1 || self.w1.iter().any(|r| r.len() != self.p) {
            return Err(Error::Shape(format!("W1 must be {h1}x{}", self.p)));
        }
        if self.w2.len() != h2 || self.w2.iter().any(|r| r.len() != h1) {
            return Err(Error::Shape(format!("W2 must be {h2}x{h1}")));
        }
        if self.w3.len() != h2 {
            return Err(Error::Shape(format!("W3 must have {h2} entries")));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(invalid("sigma must be non-negative"));
        }
        let finite = self.w1.iter().chain(&self.w2).all(|r| all_finite(r))
            && all_finite(&self.b1)
            && all_finite(&self.b2)
            && all_finite(&self.w3)
            && self.b3.is_finite();
        if !finite {
            return Err(invalid("MLP weights must be finite"));
        }
        Ok(())
    }

    /// Mean of the next value given lags `x = [y_{t-1}, …, y_{t-p}]`.
    pub fn mean(&self, x: &[f64]) -> f64 {
        let h1: Vec<f64> = self
            .w1
            .iter()
            .zip(&self.b1)
            .map(|(row, b)| (dot(row, x) + b).tanh())
            .collect();
        let h2: Vec<f64> = self
            .w2
            .iter()
            .zip(&self.b2)
            .map(|(row, b)| (dot(row, &h1) + b).tanh())
            .collect();
        dot(&self.w3, &h2) + self.b3
    }

    /// Random network with Gaussian weights scaled by fan-in; `gain` sets the
    /// pre-activation scale and `level` the output bias.
    pub fn random(p: usize, h1: usize, h2: usize, gain: f64, level: f64, sigma: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = |sd: f64| -> f64 {
            let z: f64 = StandardNormal.sample(&mut rng);
            z * sd
        };
        let w1 = (0..h1)
            .map(|_| (0..p).map(|_| draw(gain / (p as f64).sqrt())).collect())
            .collect();
        let b1 = (0..h1).map(|_| draw(0.1)).collect();
        let w2 = (0..h2)
            .map(|_| (0..h1).map(|_| draw(gain / (h1 as f64).sqrt())).collect())
            .collect();
        let b2 = (0..h2).map(|_| draw(0.1)).collect();
        let w3 = (0..h2).map(|_| draw(1.0 / (h2 as f64).sqrt())).collect();
        Self {
            p,
            w1,
            b1,
            w2,
            b2,
            w3,
            b3: level,
            sigma,
        }
    }

    /// Reads the weight CSV: a `p,h1,h2` header, one line with the three
    /// sizes, then the rows of W1 (h1 lines of p values), b1 (one line), W2
    /// (h2 lines of h1 values), b2, W3 (one line of h2 values) and b3 (one
    /// value).
    pub fn read_weights(path: &Path, sigma: f64) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .flexible(true)
            .has_headers(true)
            .from_path(path)
            .map_err(|e| Error::parse(path, 1, e.to_string()))?;
        let mut lines: Vec<(u64, Vec<f64>)> = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| Error::parse(path, 0, e.to_string()))?;
            let line = rec.position().map_or(0, |p| p.line());
            let vals = rec
                .iter()
                .map(|f| f.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<f64>, _>>()
                .map_err(|e| Error::parse(path, line, e.to_string()))?;
            lines.push((line, vals));
        }
        let mut it = lines.into_iter();
        let mut next = |want: usize, what: &str| -> Result<Vec<f64>> {
            let (line, v) = it
                .next()
                .ok_or_else(|| Error::parse(path, 0, format!("missing {what}")))?;
            if v.len() != want {
                return Err(Error::parse(path, line, format!("{what}: expected {want} values, got {}", v.len())));
            }
            Ok(v)
        };
        let dims = next(3, "shape line")?;
        let (p, h1, h2) = (dims[0] as usize, dims[1] as usize, dims[2] as usize);
        let w1 = (0..h1).map(|_| next(p, "W1 row")).collect::<Result<Vec<_>>>()?;
        let b1 = next(h1, "b1")?;
        let w2 = (0..h2).map(|_| next(h1, "W2 row")).collect::<Result<Vec<_>>>()?;
        let b2 = next(h2, "b2")?;
        let w3 = next(h2, "W3")?;
        let b3 = next(1, "b3")?[0];
        let spec = Self {
            p,
            w1,
            b1,
            w2,
            b2,
            w3,
            b3,
            sigma,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn write_weights(&self, path: &Path) -> Result<()> {
        let (h1, h2) = self.hidden();
        let mut out = String::from("p,h1,h2\n");
        out.push_str(&format!("{},{},{}\n", self.p, h1, h2));
        let mut row = |v: &[f64]| {
            let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            out.push_str(&s.join(","));
            out.push('\n');
        };
        self.w1.iter().for_each(|r| row(r));
        row(&self.b1);
        self.w2.iter().for_each(|r| row(r));
        row(&self.b2);
        row(&self.w3);
        row(&[self.b3]);
        let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        f.write_all(out.as_bytes()).map_err(|e| Error::io(path, e))
    }
}

impl ArGarchSpec {
    pub fn persistence(&self) -> f64 {
        self.alpha.iter().sum::<f64>() + self.beta.iter().sum::<f64>()
    }

    pub fn unconditional_variance(&self) -> f64 {
        self.omega / (1.0 - self.persistence())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(invalid(format!("omega must be positive, got {}", self.omega)));
        }
        if self.alpha.iter().chain(&self.beta).any(|&c| !(c >= 0.0 && c.is_finite())) {
            return Err(invalid("GARCH alpha and beta must be non-negative"));
        }
        if !(self.persistence() < 1.0) {
            return Err(invalid(format!(
                "GARCH requires sum(alpha) + sum(beta) < 1, got {}",
                self.persistence()
            )));
        }
        if !self.mu.is_finite() || !all_finite(&self.phi) {
            return Err(invalid("AR coefficients must be finite"));
        }
        Ok(())
    }
}

impl DgpSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            DgpSpec::Sarima(s) => s.validate(),
            DgpSpec::ArHeavyTail(s) => s.validate(),
            DgpSpec::MlpAr(s) => s.validate(),
            DgpSpec::ArGarch(s) => s.validate(),
        }
    }

    /// Short label used in reports.
    pub fn label(&self) -> String {
        match self {
            DgpSpec::Sarima(s) => format!(
                "SARIMA({},0,{})x({},0,{})_{}",
                s.phi.len(),
                s.theta.len(),
                s.seasonal_phi.len(),
                s.seasonal_theta.len(),
                s.period
            ),
            DgpSpec::ArHeavyTail(s) => format!("AR({})-t", s.lags.iter().max().copied().unwrap_or(0)),
            DgpSpec::MlpAr(s) => {
                let (h1, h2) = s.hidden();
                format!("MLP-AR({})({h1},{h2})", s.p)
            }
            DgpSpec::ArGarch(s) => format!("AR({})+GARCH({},{})", s.phi.len(), s.alpha.len(), s.beta.len()),
        }
    }

    /// Stationary mean of the linear processes, `None` for the MLP.
    pub fn stationary_mean(&self) -> Option<f64> {
        let m = match self {
            DgpSpec::Sarima(s) => s.mu / (1.0 - s.phi.iter().sum::<f64>() - s.seasonal_phi.iter().sum::<f64>()),
            DgpSpec::ArHeavyTail(s) => s.mu / (1.0 - s.phi.iter().sum::<f64>()),
            DgpSpec::ArGarch(s) => s.mu / (1.0 - s.phi.iter().sum::<f64>()),
            DgpSpec::MlpAr(_) => return None,
        };
        m.is_finite().then_some(m)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub n_steps: usize,
    pub burn_in: usize,
    pub seed: u64,
    pub init_value: f64,
}

impl SimConfig {
    pub fn new(n_steps: usize, seed: u64, init_value: f64) -> Self {
        Self {
            n_steps,
            burn_in: DEFAULT_BURN_IN,
            seed,
            init_value,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_steps == 0 {
            return Err(invalid("n_steps must be at least 1"));
        }
        if !self.init_value.is_finite() {
            return Err(invalid("init_value must be finite"));
        }
        Ok(())
    }

    fn total(&self) -> usize {
        self.burn_in + self.n_steps
    }
}

fn check_finite(v: f64, step: usize, what: &str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite {
            step,
            context: format!("{what} diverged"),
        })
    }
}

/// `y` carries `pre` pre-sample values; returns the last `n_steps`.
fn emit(y: Vec<f64>, pre: usize, cfg: &SimConfig) -> Vec<f64> {
    y[pre + cfg.burn_in..].to_vec()
}

pub fn simulate_sarima(spec: &SarimaSpec, cfg: &SimConfig) -> Result<Vec<f64>> {
    spec.validate()?;
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let sigma = spec.sigma2.sqrt();
    let (ar_pre, ma_pre) = (spec.ar_span(), spec.ma_span());
    let mut y = vec![cfg.init_value; ar_pre];
    let mut eps = vec![0.0; ma_pre];
    y.reserve(cfg.total());
    eps.reserve(cfg.total());
    let m = spec.period;
    for t in 0..cfg.total() {
        let (ty, te) = (ar_pre + t, ma_pre + t);
        let z: f64 = StandardNormal.sample(&mut rng);
        let e = sigma * z;
        let mut v = spec.mu + e;
        for (i, c) in spec.phi.iter().enumerate() {
            v += c * y[ty - 1 - i];
        }
        for (j, c) in spec.theta.iter().enumerate() {
            v += c * eps[te - 1 - j];
        }
        for (i, c) in spec.seasonal_phi.iter().enumerate() {
            v += c * y[ty - (i + 1) * m];
        }
        for (j, c) in spec.seasonal_theta.iter().enumerate() {
            v += c * eps[te - (j + 1) * m];
        }
        y.push(check_finite(v, t, "SARIMA recursion")?);
        eps.push(e);
    }
    Ok(emit(y, ar_pre, cfg))
}

pub fn simulate_ar_t(spec: &ArTSpec, cfg: &SimConfig) -> Result<Vec<f64>> {
    spec.validate()?;
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let t_dist = StudentT::new(spec.nu).map_err(|e| invalid(e.to_string()))?;
    let scale = ((spec.nu - 2.0) / spec.nu).sqrt();
    let pre = spec.lags.iter().copied().max().unwrap_or(0);
    let mut y = vec![cfg.init_value; pre];
    y.reserve(cfg.total());
    for t in 0..cfg.total() {
        let z = t_dist.sample(&mut rng) * scale;
        let mut v = spec.mu + spec.sigma * z;
        for (l, c) in spec.lags.iter().zip(&spec.phi) {
            v += c * y[pre + t - l];
        }
        y.push(check_finite(v, t, "AR-t recursion")?);
    }
    Ok(emit(y, pre, cfg))
}

pub fn simulate_mlp_ar(spec: &MlpArSpec, cfg: &SimConfig) -> Result<Vec<f64>> {
    spec.validate()?;
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let p = spec.p;
    let mut y = vec![cfg.init_value; p];
    y.reserve(cfg.total());
    let mut x = vec![0.0; p];
    for t in 0..cfg.total() {
        let now = p + t;
        for (i, xi) in x.iter_mut().enumerate() {
            *xi = y[now - 1 - i];
        }
        let z: f64 = StandardNormal.sample(&mut rng);
        let v = spec.mean(&x) + spec.sigma * z;
        y.push(check_finite(v, t, "MLP-AR recursion")?);
    }
    Ok(emit(y, p, cfg))
}

/// Simulates the observations; see [`simulate_ar_garch_with_variance`] for
/// the conditional-variance path as well.
pub fn simulate_ar_garch(spec: &ArGarchSpec, cfg: &SimConfig) -> Result<Vec<f64>> {
    simulate_ar_garch_with_variance(spec, cfg).map(|(y, _, _)| y)
}

/// Returns `(y, ε, σ²)` after burn-in.
pub fn simulate_ar_garch_with_variance(
    spec: &ArGarchSpec,
    cfg: &SimConfig,
) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    spec.validate()?;
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let r = spec.phi.len();
    let vpre = spec.alpha.len().max(spec.beta.len());
    let mut y = vec![cfg.init_value; r];
    let mut eps: Vec<f64> = vec![0.0; vpre];
    let mut var = vec![spec.unconditional_variance(); vpre];
    for t in 0..cfg.total() {
        let tv = vpre + t;
        let mut s2 = spec.omega;
        for (i, a) in spec.alpha.iter().enumerate() {
            s2 += a * eps[tv - 1 - i].powi(2);
        }
        for (j, b) in spec.beta.iter().enumerate() {
            s2 += b * var[tv - 1 - j];
        }
        if !(s2 > 0.0 && s2.is_finite()) {
            return Err(Error::NonFinite {
                step: t,
                context: format!("conditional variance {s2}"),
            });
        }
        let z: f64 = StandardNormal.sample(&mut rng);
        let e = s2.sqrt() * z;
        let mut v = spec.mu + e;
        for (i, c) in spec.phi.iter().enumerate() {
            v += c * y[r + t - 1 - i];
        }
        y.push(check_finite(v, t, "AR-GARCH recursion")?);
        eps.push(e);
        var.push(s2);
    }
    let keep = cfg.burn_in;
    Ok((
        y[r + keep..].to_vec(),
        eps[vpre + keep..].to_vec(),
        var[vpre + keep..].to_vec(),
    ))
}

pub fn simulate(spec: &DgpSpec, cfg: &SimConfig) -> Result<Vec<f64>> {
    match spec {
        DgpSpec::Sarima(s) => simulate_sarima(s, cfg),
        DgpSpec::ArHeavyTail(s) => simulate_ar_t(s, cfg),
        DgpSpec::MlpAr(s) => simulate_mlp_ar(s, cfg),
        DgpSpec::ArGarch(s) => simulate_ar_garch(s, cfg),
    }
}

/// SplitMix64 finalizer applied to `seed + golden_gamma * (ordinal + 1)`.
///
/// Station `i` of a panel simulated with `seed` always draws from
/// `station_seed(seed, i)`.
pub fn station_seed(seed: u64, ordinal: u64) -> u64 {
    let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(ordinal.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Grid and randomness settings for panel simulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PanelSimOptions {
    pub n_steps: usize,
    pub burn_in: usize,
    pub seed: u64,
    pub start: NaiveDateTime,
}

impl PanelSimOptions {
    pub fn new(n_steps: usize, seed: u64) -> Self {
        Self {
            n_steps,
            burn_in: DEFAULT_BURN_IN,
            seed,
            start: default_start(),
        }
    }
}

/// 2023-01-01 00:00, the first hour of simulated panels unless configured.
pub fn default_start() -> NaiveDateTime {
    chrono::NaiveDate::from_ymd_opt(2023, 1, 1)
        .expect("valid date")
        .and_hms_opt(0, 0, 0)
        .expect("valid time")
}

/// Simulates every station from the shared `spec`, each starting at its own
/// level with its own derived seed.
pub fn simulate_panel(spec: &DgpSpec, stations: &[(String, f64)], opts: &PanelSimOptions) -> Result<PanelSeries> {
    let specs = vec![spec.clone(); stations.len()];
    simulate_panel_per_station(&specs, stations, opts)
}

/// As [`simulate_panel`] but with one spec per station, for heterogeneous
/// panels.
pub fn simulate_panel_per_station(
    specs: &[DgpSpec],
    stations: &[(String, f64)],
    opts: &PanelSimOptions,
) -> Result<PanelSeries> {
    if stations.is_empty() {
        return Err(Error::EmptyInput("no stations to simulate".into()));
    }
    if specs.len() != stations.len() {
        return Err(Error::Shape(format!("{} specs for {} stations", specs.len(), stations.len())));
    }
    let rows = stations
        .par_iter()
        .zip(specs)
        .enumerate()
        .map(|(i, ((_, init), spec))| {
            let cfg = SimConfig {
                n_steps: opts.n_steps,
                burn_in: opts.burn_in,
                seed: station_seed(opts.seed, i as u64),
                init_value: *init,
            };
            simulate(spec, &cfg)
        })
        .collect::<Result<Vec<_>>>()?;
    let ids = stations.iter().map(|(s, _)| s.clone()).collect();
    PanelSeries::new(ids, opts.start, rows)
}

/// Reads `station_id,init_value`.
pub fn read_station_inits(path: &Path) -> Result<Vec<(String, f64)>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| Error::parse(path, 1, e.to_string()))?;
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::parse(path, 0, e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() < 2 {
            return Err(Error::parse(path, line, "expected station_id,init_value"));
        }
        let v: f64 = rec[1]
            .trim()
            .parse()
            .map_err(|_| Error::parse(path, line, format!("bad init value {:?}", &rec[1])))?;
        out.push((rec[0].trim().to_string(), v));
    }
    if out.is_empty() {
        return Err(Error::EmptyInput(format!("{} lists no stations", path.display())));
    }
    Ok(out)
}

/// Ordinary least-squares AR fit.
#[derive(Debug, Clone, PartialEq)]
pub struct ArFit {
    pub mu: f64,
    pub phi: Vec<f64>,
    /// Residual standard deviation (degrees-of-freedom corrected).
    pub sigma: f64,
    /// Standard errors of `[mu, phi...]`.
    pub std_errors: Vec<f64>,
}

/// Regresses `y_t` on an intercept and `y_{t−ℓ}` for each lag.
pub fn fit_ar_ols(series: &[f64], lags: &[usize]) -> Result<ArFit> {
    use nalgebra::{DMatrix, DVector};
    if lags.is_empty() || lags.contains(&0) {
        return Err(invalid("lag set must be non-empty and positive"));
    }
    let max_lag = *lags.iter().max().expect("non-empty");
    let k = lags.len() + 1;
    if series.len() <= max_lag + k {
        return Err(Error::TooShort {
            required: max_lag + k + 1,
            actual: series.len(),
        });
    }
    let n = series.len() - max_lag;
    let x = DMatrix::from_fn(n, k, |r, c| {
        if c == 0 {
            1.0
        } else {
            series[max_lag + r - lags[c - 1]]
        }
    });
    let y = DVector::from_iterator(n, series[max_lag..].iter().copied());
    let xtx = x.transpose() * &x;
    // Scale-aware rank check on the Gram matrix.
    let sv = xtx.clone().singular_values();
    let (smax, smin) = (sv.max(), sv.min());
    if !(smin > smax * 1e-12) {
        return Err(Error::Singular(format!(
            "lagged design is rank deficient (singular values {smin:e}..{smax:e})"
        )));
    }
    let inv = xtx
        .try_inverse()
        .ok_or_else(|| Error::Singular("lagged design is not invertible".into()))?;
    let beta = &inv * x.transpose() * &y;
    let resid = &y - &x * &beta;
    let dof = (n - k) as f64;
    let s2 = resid.norm_squared() / dof;
    let std_errors = (0..k).map(|i| (s2 * inv[(i, i)]).sqrt()).collect();
    Ok(ArFit {
        mu: beta[0],
        phi: beta.iter().skip(1).copied().collect(),
        sigma: s2.sqrt(),
        std_errors,
    })
}

/// Desk-scale parameterizations with the reference model orders.
pub mod reference {
    use super::*;

    /// SARIMA(3,0,3)×(1,0,1)₂₄ with stationary mean 1.
    pub fn sarima() -> DgpSpec {
        DgpSpec::Sarima(SarimaSpec {
            mu: 0.15,
            phi: vec![0.45, 0.15, -0.05],
            theta: vec![0.3, 0.1, 0.05],
            seasonal_phi: vec![0.3],
            seasonal_theta: vec![0.15],
            period: 24,
            sigma2: 0.01,
        })
    }

    /// AR(4) with unit-variance Student-t(5) innovations, mean 1.
    pub fn ar_t() -> DgpSpec {
        DgpSpec::ArHeavyTail(ArTSpec::ar(0.2, vec![0.5, 0.15, 0.1, 0.05], 0.15, 5.0))
    }

    /// MLP-AR(24) with hidden layers (100, 50) and seeded random weights.
    pub fn mlp_ar() -> DgpSpec {
        DgpSpec::MlpAr(MlpArSpec::random(24, 100, 50, 1.5, 1.0, 0.1, 20_240_601))
    }

    /// AR(5) mean with GARCH(1,6) variance, mean 1.
    pub fn ar_garch() -> DgpSpec {
        DgpSpec::ArGarch(ArGarchSpec {
            mu: 0.25,
            phi: vec![0.4, 0.15, 0.1, 0.05, 0.05],
            omega: 0.002,
            alpha: vec![0.1],
            beta: vec![0.3, 0.15, 0.1, 0.1, 0.05, 0.05],
        })
    }

    pub const NAMES: [&str; 4] = ["sarima", "ar_t", "mlp_ar", "ar_garch"];

    pub fn by_name(name: &str) -> Option<DgpSpec> {
        match name {
            "sarima" => Some(sarima()),
            "ar_t" => Some(ar_t()),
            "mlp_ar" => Some(mlp_ar()),
            "ar_garch" => Some(ar_garch()),
            _ => None,
        }
    }

    pub fn all() -> Vec<DgpSpec> {
        vec![sarima(), ar_t(), mlp_ar(), ar_garch()]
    }
}

/// How a network is specified in a config file: a weight CSV or a seeded
/// random draw.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MlpArFile {
    pub sigma: f64,
    #[serde(default)]
    pub weights_file: Option<PathBuf>,
    #[serde(default)]
    pub random: Option<RandomMlp>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomMlp {
    pub p: usize,
    pub h1: usize,
    pub h2: usize,
    #[serde(default = "RandomMlp::default_gain")]
    pub gain: f64,
    #[serde(default = "RandomMlp::default_level")]
    pub level: f64,
    pub seed: u64,
}

impl RandomMlp {
    fn default_gain() -> f64 {
        1.5
    }

    fn default_level() -> f64 {
        1.0
    }
}

/// DGP as written in config files. Relative weight paths resolve against the
/// directory of the file that names them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DgpFile {
    Sarima(SarimaSpec),
    ArHeavyTail(ArTSpec),
    MlpAr(MlpArFile),
    ArGarch(ArGarchSpec),
    /// One of `sarima`, `ar_t`, `mlp_ar`, `ar_garch` from [`reference`].
    Reference { name: String },
}

impl DgpFile {
    pub fn resolve(&self, base_dir: &Path) -> Result<DgpSpec> {
        let spec = match self {
            DgpFile::Sarima(s) => DgpSpec::Sarima(s.clone()),
            DgpFile::ArHeavyTail(s) => DgpSpec::ArHeavyTail(s.clone()),
            DgpFile::ArGarch(s) => DgpSpec::ArGarch(s.clone()),
            DgpFile::MlpAr(m) => match (&m.weights_file, &m.random) {
                (Some(w), None) => DgpSpec::MlpAr(MlpArSpec::read_weights(&base_dir.join(w), m.sigma)?),
                (None, Some(r)) => DgpSpec::MlpAr(MlpArSpec::random(r.p, r.h1, r.h2, r.gain, r.level, m.sigma, r.seed)),
                _ => {
                    return Err(Error::Config(
                        "mlp_ar needs exactly one of weights_file or random".into(),
                    ))
                }
            },
            DgpFile::Reference { name } => reference::by_name(name)
                .ok_or_else(|| Error::Config(format!("unknown reference DGP {name:?}")))?,
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Reads a TOML DGP file.
pub fn load_dgp(path: &Path) -> Result<DgpSpec> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let file: DgpFile = toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    file.resolve(path.parent().unwrap_or(Path::new(".")))
}
