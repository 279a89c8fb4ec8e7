//! End-to-end experiment: build a panel, test slope homogeneity, cluster
//! stations, train the pooling schemes and write the report bundle.

mod config;
mod schemes;
mod summary;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use log::info;

pub use config::{DataConfig, ExperimentConfig, IngestData, PanelData, SimulateData, SplitConfig};
pub use schemes::{
    fit_scope, run_cluster, run_global, run_groups, run_station, MetricSummary, Scheme, SchemeContext, SchemeResult,
    SchemeSummary, ScopeFit,
};
pub use summary::render_summary;

use crate::cluster::{cluster_stations, ClusterAssignment};
use crate::error::{Error, Result};
use crate::features::extract_panel_features;
use crate::homogeneity::{slope_homogeneity_with_dof, HomogeneityResult};
use crate::metrics::{write_reports, IntervalReport};
use crate::panel::PanelSeries;

pub const OUTPUT_FILES: [&str; 6] = [
    "config.echo",
    "assignment.csv",
    "diagnostics.csv",
    "homogeneity.json",
    "metrics.csv",
    "summary.txt",
];

/// Everything an experiment produced, in memory.
#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub name: String,
    pub dgp: String,
    pub n_stations: usize,
    pub n_hours: usize,
    pub boundary: usize,
    pub homogeneity: HomogeneityResult,
    pub assignment: Option<ClusterAssignment>,
    pub results: Vec<SchemeResult>,
}

impl ExperimentReport {
    pub fn scheme(&self, s: Scheme) -> Option<&SchemeResult> {
        self.results.iter().find(|r| r.scheme == s)
    }

    /// All report rows ordered by scheme then scope.
    pub fn rows(&self) -> Vec<&IntervalReport> {
        self.results.iter().flat_map(|r| &r.reports).collect()
    }
}

/// Clusters stations on features of their training-period series.
pub fn cluster_training_period(
    panel: &PanelSeries,
    boundary: usize,
    opts: &crate::cluster::ClusterOptions,
) -> Result<ClusterAssignment> {
    let train = panel.slice_hours(0, boundary)?;
    let table = extract_panel_features(&train)?;
    cluster_stations(&table, opts)
}

/// Runs the experiment in memory without writing anything.
pub fn run_in_memory(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let (panel, dgp) = cfg.load_panel().map_err(|e| e.in_stage("data"))?;
    let boundary = cfg.split.boundary_index(&panel).map_err(|e| e.in_stage("data"))?;
    info!(
        "{}: {} stations x {} hours, test from hour {boundary}",
        cfg.name,
        panel.n_stations(),
        panel.n_hours()
    );
    let homogeneity = slope_homogeneity_with_dof(&panel, cfg.homogeneity_k).map_err(|e| e.in_stage("homogeneity"))?;

    let schemes = cfg.scheme_set();
    let assignment = if schemes.contains(&Scheme::Cluster) {
        let mut opts = cfg.cluster.clone();
        opts.seed = cfg.seed;
        Some(cluster_training_period(&panel, boundary, &opts).map_err(|e| e.in_stage("cluster"))?)
    } else {
        None
    };

    let ctx = SchemeContext {
        panel: &panel,
        boundary,
        params: &cfg.train,
        dgp: &dgp,
    };
    let mut results = Vec::new();
    for s in schemes {
        info!("training {s} scheme");
        let r = match s {
            Scheme::Global => run_global(&ctx),
            Scheme::Cluster => run_cluster(&ctx, assignment.as_ref().expect("clustered above")),
            Scheme::Station => run_station(&ctx),
        };
        results.push(r.map_err(|e| e.in_stage("train"))?);
    }
    Ok(ExperimentReport {
        name: cfg.name.clone(),
        dgp,
        n_stations: panel.n_stations(),
        n_hours: panel.n_hours(),
        boundary,
        homogeneity,
        assignment,
        results,
    })
}

struct Bundle {
    dir: PathBuf,
    created_dir: bool,
    written: Vec<PathBuf>,
}

impl Bundle {
    fn open(dir: &Path) -> Result<Self> {
        let created_dir = !dir.exists();
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        for f in OUTPUT_FILES {
            let p = dir.join(f);
            if p.exists() {
                fs::remove_file(&p).map_err(|e| Error::io(&p, e))?;
            }
        }
        Ok(Self {
            dir: dir.to_path_buf(),
            created_dir,
            written: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, f: impl FnOnce(&Path) -> Result<()>) -> Result<()> {
        let p = self.dir.join(name);
        self.written.push(p.clone());
        f(&p)
    }

    fn discard(self) {
        for p in &self.written {
            let _ = fs::remove_file(p);
        }
        if self.created_dir {
            let _ = fs::remove_dir(&self.dir);
        }
    }
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn write_bundle(bundle: &mut Bundle, cfg: &ExperimentConfig, report: &ExperimentReport) -> Result<()> {
    bundle.write("config.echo", |p| write_text(p, &cfg.echo()?))?;
    if let Some(a) = &report.assignment {
        bundle.write("assignment.csv", |p| a.write_assignment(p))?;
        bundle.write("diagnostics.csv", |p| a.write_diagnostics(p))?;
    }
    bundle.write("homogeneity.json", |p| report.homogeneity.write_json(p))?;
    bundle.write("metrics.csv", |p| {
        let mut f = fs::File::create(p).map_err(|e| Error::io(p, e))?;
        let rows: Vec<IntervalReport> = report.rows().into_iter().cloned().collect();
        write_reports(&mut f, &rows).map_err(|e| Error::io(p, e))?;
        f.flush().map_err(|e| Error::io(p, e))
    })?;
    bundle.write("summary.txt", |p| write_text(p, &render_summary(report)))
}

/// Runs the experiment and writes the report bundle to `cfg.output_dir`.
/// On failure every file this run wrote is removed.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let mut bundle = Bundle::open(&cfg.resolved_output_dir()).map_err(|e| e.in_stage("output"))?;
    let outcome = run_in_memory(cfg).and_then(|report| {
        write_bundle(&mut bundle, cfg, &report)
            .map_err(|e| e.in_stage("output"))
            .map(|_| report)
    });
    if outcome.is_err() {
        bundle.discard();
    }
    outcome
}
