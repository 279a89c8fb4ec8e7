//! Extracts the 25 time-series features for stations from two different
//! processes and shows which features separate them.
//!
//! cargo run --release --example features

use poolcast::dgp::{reference, simulate_panel_per_station, PanelSimOptions};
use poolcast::features::{extract_panel_features, FEATURE_NAMES};
use poolcast::stats::mean;

fn main() -> poolcast::Result<()> {
    let specs: Vec<_> = (0..12).map(|i| if i < 6 { reference::sarima() } else { reference::ar_garch() }).collect();
    let stations: Vec<(String, f64)> = (0..12).map(|i| (format!("S{i:02}"), 1.0)).collect();
    let panel = simulate_panel_per_station(&specs, &stations, &PanelSimOptions::new(24 * 60, 9))?;
    let table = extract_panel_features(&panel)?;

    println!("{:<22} {:>12} {:>12}", "feature", "sarima", "ar_garch");
    for (j, name) in FEATURE_NAMES.iter().enumerate() {
        let col = |rows: &[Vec<f64>]| mean(&rows.iter().map(|r| r[j]).collect::<Vec<_>>());
        println!("{name:<22} {:>12.4} {:>12.4}", col(&table.rows[..6]), col(&table.rows[6..]));
    }
    let out = std::env::temp_dir().join("poolcast-features.csv");
    table.write_csv(&out)?;
    println!("\nwrote {}", out.display());
    Ok(())
}
