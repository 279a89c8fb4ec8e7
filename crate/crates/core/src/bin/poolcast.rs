use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chrono::NaiveDateTime;
use clap::{Args, Parser, Subcommand};

use poolcast::cluster::{cluster_stations, read_assignment, ClusterOptions, DEFAULT_RESTARTS};
use poolcast::dgp::{default_start, load_dgp, read_station_inits, simulate_panel, PanelSimOptions, DEFAULT_BURN_IN};
use poolcast::features::{extract_panel_features, FeatureTable};
use poolcast::harness::{run_experiment, ExperimentConfig, Scheme};
use poolcast::homogeneity::{slope_homogeneity_with_dof, DEFAULT_DOF};
use poolcast::panel::{
    build_design_matrix, ingest_csv, read_static_covariates, read_station_list, InputFormat, PanelSeries, HOUR_FORMAT,
};
use poolcast::qboost::{train, TrainParams, INTERVAL_QUANTILES};
use poolcast::{Error, Result};

#[derive(Parser)]
#[command(name = "poolcast", version, about = "Pooled quantile forecasting of hourly station demand")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Aggregate raw event records into an hourly panel CSV.
    Ingest(IngestArgs),
    /// Simulate a panel from a DGP file.
    Simulate(SimulateArgs),
    /// Extract per-station time-series features.
    Features(FeaturesArgs),
    /// Cluster stations from a feature table.
    Cluster(ClusterArgs),
    /// Train quantile forests per scheme scope.
    Train(TrainArgs),
    /// Slope-homogeneity test on a panel.
    Homogeneity(HomogeneityArgs),
    /// Run a full experiment from a config file.
    Report(ReportArgs),
}

#[derive(Args)]
struct IngestArgs {
    #[arg(long)]
    events: PathBuf,
    #[arg(long, default_value = "station_id")]
    station_col: String,
    #[arg(long, default_value = "timestamp")]
    timestamp_col: String,
    #[arg(long, default_value = "value")]
    value_col: String,
    #[arg(long)]
    timestamp_format: Option<String>,
    /// Keep only the station ids listed in this file.
    #[arg(long)]
    include: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    dgp: PathBuf,
    /// `station_id,init_value` CSV.
    #[arg(long)]
    stations: PathBuf,
    #[arg(long)]
    steps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_BURN_IN)]
    burn_in: usize,
    /// First hour, `YYYY-MM-DDTHH:MM:SS`.
    #[arg(long)]
    start: Option<String>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct FeaturesArgs {
    #[arg(long)]
    panel: PathBuf,
    /// Static covariates appended to each station's features.
    #[arg(long)]
    covariates: Option<PathBuf>,
    /// Use only hours before this time.
    #[arg(long)]
    until: Option<String>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ClusterArgs {
    #[arg(long)]
    features: PathBuf,
    #[arg(long, default_value_t = 0.9)]
    threshold: f64,
    #[arg(long, default_value_t = 2)]
    kmin: usize,
    /// Largest k, or `auto` for min(N_unique - 1, 200).
    #[arg(long, default_value = "auto")]
    kmax: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_RESTARTS)]
    restarts: usize,
    /// Directory receiving assignment.csv and diagnostics.csv.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long)]
    panel: PathBuf,
    #[arg(long, default_value = "global")]
    scheme: String,
    /// Required for the cluster scheme.
    #[arg(long)]
    assignment: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_values_t = INTERVAL_QUANTILES.to_vec())]
    quantiles: Vec<f64>,
    /// TOML file of training parameters.
    #[arg(long)]
    params: Option<PathBuf>,
    /// Train only on hours before this time.
    #[arg(long)]
    until: Option<String>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct HomogeneityArgs {
    #[arg(long)]
    panel: PathBuf,
    #[arg(long, default_value_t = DEFAULT_DOF)]
    k: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long)]
    experiment: PathBuf,
}

fn parse_time(s: &str) -> Result<NaiveDateTime> {
    NaiveDateTime::parse_from_str(s, HOUR_FORMAT).map_err(|e| Error::Config(format!("time {s:?}: {e}")))
}

fn until(panel: PanelSeries, t: &Option<String>) -> Result<PanelSeries> {
    match t {
        Some(s) => {
            let b = panel.boundary_index(parse_time(s)?)?;
            panel.slice_hours(0, b)
        }
        None => Ok(panel),
    }
}

fn ingest(a: IngestArgs) -> Result<()> {
    let format = InputFormat {
        station_column: a.station_col,
        timestamp_column: a.timestamp_col,
        value_column: a.value_col,
        timestamp_format: a.timestamp_format,
    };
    let mut panel = ingest_csv(&a.events, &format)?;
    if let Some(p) = &a.include {
        panel = panel.retain_stations(&read_station_list(p)?)?;
    }
    panel.write_csv(&a.out)
}

fn simulate(a: SimulateArgs) -> Result<()> {
    let spec = load_dgp(&a.dgp)?;
    let stations = read_station_inits(&a.stations)?;
    let opts = PanelSimOptions {
        n_steps: a.steps,
        burn_in: a.burn_in,
        seed: a.seed,
        start: a.start.as_deref().map(parse_time).transpose()?.unwrap_or_else(default_start),
    };
    simulate_panel(&spec, &stations, &opts)?.write_csv(&a.out)
}

fn features(a: FeaturesArgs) -> Result<()> {
    let mut panel = until(PanelSeries::read_csv(&a.panel)?, &a.until)?;
    if let Some(p) = &a.covariates {
        let (names, rows) = read_static_covariates(p)?;
        panel.attach_covariates(names, &rows);
    }
    extract_panel_features(&panel)?.write_csv(&a.out)
}

fn cluster(a: ClusterArgs) -> Result<()> {
    let table = FeatureTable::read_csv(&a.features)?;
    let k_max = match a.kmax.as_str() {
        "auto" => None,
        s => Some(
            s.parse()
                .map_err(|_| Error::Config(format!("--kmax must be an integer or auto, got {s:?}")))?,
        ),
    };
    let opts = ClusterOptions {
        threshold: a.threshold,
        k_min: a.kmin,
        k_max,
        seed: a.seed,
        n_restarts: a.restarts,
    };
    let assignment = cluster_stations(&table, &opts)?;
    fs::create_dir_all(&a.out).map_err(|e| Error::io(&a.out, e))?;
    assignment.write_assignment(&a.out.join("assignment.csv"))?;
    assignment.write_diagnostics(&a.out.join("diagnostics.csv"))
}

fn load_params(path: &Option<PathBuf>) -> Result<TrainParams> {
    let p = match path {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
            toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?
        }
        None => TrainParams::default(),
    };
    p.validate().map_err(|e| Error::Config(e.to_string()))?;
    Ok(p)
}

fn scopes(panel: &PanelSeries, scheme: Scheme, assignment: &Option<PathBuf>) -> Result<Vec<(String, Vec<usize>)>> {
    Ok(match scheme {
        Scheme::Global => vec![("global".into(), (0..panel.n_stations()).collect())],
        Scheme::Station => (0..panel.n_stations())
            .map(|i| (panel.stations()[i].clone(), vec![i]))
            .collect(),
        Scheme::Cluster => {
            let path = assignment
                .as_ref()
                .ok_or_else(|| Error::Config("--assignment is required for the cluster scheme".into()))?;
            let a = read_assignment(path)?;
            let mut groups = vec![Vec::new(); a.k];
            for (i, s) in panel.stations().iter().enumerate() {
                let l = a
                    .label_of(s)
                    .ok_or_else(|| Error::Data(format!("station {s} has no cluster")))?;
                groups[l].push(i);
            }
            groups
                .into_iter()
                .enumerate()
                .filter(|(_, g)| !g.is_empty())
                .map(|(c, g)| (format!("cluster_{c}"), g))
                .collect()
        }
    })
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn train_cmd(a: TrainArgs) -> Result<()> {
    let scheme: Scheme = a.scheme.parse()?;
    let params = load_params(&a.params)?;
    let panel = until(PanelSeries::read_csv(&a.panel)?, &a.until)?;
    let mut index = String::from("scope,station_id\n");
    for (scope, members) in scopes(&panel, scheme, &a.assignment)? {
        let sub = panel.select(&members)?;
        let design = build_design_matrix(&sub)?;
        let dir = a.out.join(&scope);
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        for &q in &a.quantiles {
            let forest = train(&design.features, &design.target, &params.with_quantile(q))?;
            forest.save(&dir.join(format!("q{q}.json")))?;
        }
        for s in sub.stations() {
            index.push_str(&format!("{scope},{s}\n"));
        }
    }
    write_file(&a.out.join("scopes.csv"), &index)
}

fn homogeneity(a: HomogeneityArgs) -> Result<()> {
    let panel = PanelSeries::read_csv(&a.panel)?;
    slope_homogeneity_with_dof(&panel, a.k)?.write_json(&a.out)
}

fn report(a: ReportArgs) -> Result<()> {
    let cfg = ExperimentConfig::load(&a.experiment)?;
    let r = run_experiment(&cfg)?;
    print!("{}", poolcast::harness::render_summary(&r));
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Ingest(a) => ingest(a),
        Command::Simulate(a) => simulate(a),
        Command::Features(a) => features(a),
        Command::Cluster(a) => cluster(a),
        Command::Train(a) => train_cmd(a),
        Command::Homogeneity(a) => homogeneity(a),
        Command::Report(a) => report(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
