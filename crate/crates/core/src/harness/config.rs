use std::fs;
use std::path::{Path, PathBuf};

use chrono::NaiveDateTime;
use serde::{Deserialize, Serialize};

use super::Scheme;
use crate::cluster::ClusterOptions;
use crate::dgp::{
    default_start, read_station_inits, simulate_panel, DgpFile, PanelSimOptions, DEFAULT_BURN_IN,
};
use crate::error::{Error, Result};
use crate::homogeneity::DEFAULT_DOF;
use crate::panel::{ingest_csv, read_static_covariates, read_station_list, InputFormat, PanelSeries, HOUR_FORMAT};
use crate::qboost::TrainParams;

/// Experiment description, normally read from TOML.
///
/// Relative paths inside the file resolve against the file's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "ExperimentConfig::default_name")]
    pub name: String,
    #[serde(default)]
    pub seed: u64,
    pub output_dir: PathBuf,
    #[serde(default = "ExperimentConfig::default_schemes")]
    pub schemes: Vec<Scheme>,
    #[serde(default)]
    pub split: SplitConfig,
    pub data: DataConfig,
    #[serde(default)]
    pub train: TrainParams,
    #[serde(default)]
    pub cluster: ClusterOptions,
    /// `k` of the homogeneity statistic's bias adjustment.
    #[serde(default = "ExperimentConfig::default_k")]
    pub homogeneity_k: f64,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitConfig {
    /// Share of hours used for training when `boundary` is absent.
    #[serde(default = "SplitConfig::default_fraction")]
    pub train_fraction: f64,
    /// First test hour, `YYYY-MM-DDTHH:MM:SS`.
    #[serde(default)]
    pub boundary: Option<String>,
}

impl Default for SplitConfig {
    fn default() -> Self {
        Self {
            train_fraction: Self::default_fraction(),
            boundary: None,
        }
    }
}

impl SplitConfig {
    fn default_fraction() -> f64 {
        0.5
    }

    pub fn boundary_index(&self, panel: &PanelSeries) -> Result<usize> {
        match &self.boundary {
            Some(s) => {
                let ts = NaiveDateTime::parse_from_str(s, HOUR_FORMAT)
                    .map_err(|e| Error::Config(format!("boundary {s:?}: {e}")))?;
                panel.boundary_index(ts)
            }
            None => {
                let b = (panel.n_hours() as f64 * self.train_fraction).round() as usize;
                if b == 0 || b >= panel.n_hours() {
                    return Err(Error::Config(format!(
                        "train_fraction {} leaves an empty period",
                        self.train_fraction
                    )));
                }
                Ok(b)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum DataConfig {
    Simulate(SimulateData),
    Panel(PanelData),
    Ingest(IngestData),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateData {
    pub dgp: DgpFile,
    /// Ignored when `init_values` lists the stations.
    #[serde(default)]
    pub n_stations: Option<usize>,
    pub horizon_hours: usize,
    #[serde(default)]
    pub burn_in: Option<usize>,
    /// First simulated hour, `YYYY-MM-DDTHH:MM:SS`.
    #[serde(default)]
    pub start: Option<String>,
    /// Common starting level; defaults to the process mean when known,
    /// otherwise 1.
    #[serde(default)]
    pub init_value: Option<f64>,
    /// `station_id,init_value` CSV.
    #[serde(default)]
    pub init_values: Option<PathBuf>,
    #[serde(default)]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PanelData {
    pub path: PathBuf,
    #[serde(default)]
    pub include: Option<PathBuf>,
    #[serde(default)]
    pub covariates: Option<PathBuf>,
    #[serde(default)]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IngestData {
    pub events: PathBuf,
    #[serde(default)]
    pub format: InputFormat,
    #[serde(default)]
    pub include: Option<PathBuf>,
    #[serde(default)]
    pub covariates: Option<PathBuf>,
    #[serde(default)]
    pub label: Option<String>,
}

impl ExperimentConfig {
    fn default_name() -> String {
        "experiment".into()
    }

    fn default_schemes() -> Vec<Scheme> {
        Scheme::ALL.to_vec()
    }

    fn default_k() -> f64 {
        DEFAULT_DOF
    }

    pub fn from_toml(text: &str, base_dir: &Path) -> Result<Self> {
        let mut cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.base_dir = base_dir.to_path_buf();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text, path.parent().unwrap_or(Path::new(".")))
            .map_err(|e| match e {
                Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
                other => other,
            })
    }

    /// The configuration as TOML, as written to `config.echo`.
    pub fn echo(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn resolved_output_dir(&self) -> PathBuf {
        self.resolve(&self.output_dir)
    }

    /// Requested schemes, deduplicated, in global → cluster → station order.
    pub fn scheme_set(&self) -> Vec<Scheme> {
        let mut s = self.schemes.clone();
        s.sort();
        s.dedup();
        s
    }

    pub fn validate(&self) -> Result<()> {
        if self.schemes.is_empty() {
            return Err(Error::Config("at least one scheme is required".into()));
        }
        if !(self.split.train_fraction > 0.0 && self.split.train_fraction < 1.0) {
            return Err(Error::Config(format!(
                "train_fraction {} not in (0, 1)",
                self.split.train_fraction
            )));
        }
        if !(self.homogeneity_k > 0.0) {
            return Err(Error::Config("homogeneity_k must be positive".into()));
        }
        self.train.validate().map_err(|e| Error::Config(e.to_string()))?;
        if let DataConfig::Simulate(s) = &self.data {
            if s.init_values.is_none() && s.n_stations.unwrap_or(0) == 0 {
                return Err(Error::Config("simulate needs n_stations or init_values".into()));
            }
            if s.horizon_hours == 0 {
                return Err(Error::Config("horizon_hours must be positive".into()));
            }
        }
        Ok(())
    }

    /// Builds the panel and its report label.
    pub fn load_panel(&self) -> Result<(PanelSeries, String)> {
        match &self.data {
            DataConfig::Simulate(s) => {
                let spec = s.dgp.resolve(&self.base_dir)?;
                let stations = match &s.init_values {
                    Some(p) => read_station_inits(&self.resolve(p))?,
                    None => {
                        let n = s.n_stations.unwrap_or(0);
                        let init = s.init_value.or(spec.stationary_mean()).unwrap_or(1.0);
                        let width = n.saturating_sub(1).to_string().len().max(3);
                        (0..n).map(|i| (format!("S{i:0width$}"), init)).collect()
                    }
                };
                let start = match &s.start {
                    Some(t) => NaiveDateTime::parse_from_str(t, HOUR_FORMAT)
                        .map_err(|e| Error::Config(format!("start {t:?}: {e}")))?,
                    None => default_start(),
                };
                let opts = PanelSimOptions {
                    n_steps: s.horizon_hours,
                    burn_in: s.burn_in.unwrap_or(DEFAULT_BURN_IN),
                    seed: self.seed,
                    start,
                };
                let panel = simulate_panel(&spec, &stations, &opts)?;
                Ok((panel, s.label.clone().unwrap_or_else(|| spec.label())))
            }
            DataConfig::Panel(d) => {
                let panel = PanelSeries::read_csv(&self.resolve(&d.path))?;
                let panel = self.filter_and_attach(panel, &d.include, &d.covariates)?;
                Ok((panel, d.label.clone().unwrap_or_else(|| "ingested".into())))
            }
            DataConfig::Ingest(d) => {
                let panel = ingest_csv(&self.resolve(&d.events), &d.format)?;
                let panel = self.filter_and_attach(panel, &d.include, &d.covariates)?;
                Ok((panel, d.label.clone().unwrap_or_else(|| "ingested".into())))
            }
        }
    }

    fn filter_and_attach(
        &self,
        panel: PanelSeries,
        include: &Option<PathBuf>,
        covariates: &Option<PathBuf>,
    ) -> Result<PanelSeries> {
        let mut panel = match include {
            Some(p) => panel.retain_stations(&read_station_list(&self.resolve(p))?)?,
            None => panel,
        };
        if let Some(p) = covariates {
            let (names, rows) = read_static_covariates(&self.resolve(p))?;
            panel.attach_covariates(names, &rows);
        }
        Ok(panel)
    }
}
