//! Runs an experiment config end to end and prints the summary tables.
//!
//! cargo run --release --example experiment -- examples/configs/sarima.toml

use std::path::PathBuf;
use std::time::Instant;

use poolcast::harness::{render_summary, run_experiment, ExperimentConfig};

fn main() -> poolcast::Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs/sarima.toml")));
    let cfg = ExperimentConfig::load(&path)?;
    let t0 = Instant::now();
    let report = run_experiment(&cfg)?;
    print!("{}", render_summary(&report));
    println!("\nwrote {} in {:.1?}", cfg.resolved_output_dir().display(), t0.elapsed());
    Ok(())
}
