//! Clusters stations drawn from three processes and compares the recovered
//! groups with the truth.
//!
//! cargo run --release --example cluster

use poolcast::cluster::{adjusted_rand_index, cluster_stations, ClusterOptions};
use poolcast::dgp::{reference, simulate_panel_per_station, PanelSimOptions};
use poolcast::features::extract_panel_features;

fn main() -> poolcast::Result<()> {
    let groups = [reference::sarima(), reference::ar_t(), reference::ar_garch()];
    let truth: Vec<usize> = (0..45).map(|i| i / 15).collect();
    let specs: Vec<_> = truth.iter().map(|&g| groups[g].clone()).collect();
    let stations: Vec<(String, f64)> = (0..45).map(|i| (format!("S{i:02}"), 1.0)).collect();
    let panel = simulate_panel_per_station(&specs, &stations, &PanelSimOptions::new(24 * 90, 4))?;
    let table = extract_panel_features(&panel)?;

    let opts = ClusterOptions {
        k_max: Some(10),
        seed: 1,
        ..ClusterOptions::default()
    };
    let a = cluster_stations(&table, &opts)?;
    println!("PCA kept {} of {} dimensions", a.basis.n_components, table.names.len());
    println!("{:>3} {:>12} {:>11}", "k", "WSS", "silhouette");
    for ((k, w), (_, s)) in a.wss_curve.iter().zip(&a.silhouette_curve) {
        println!("{k:>3} {w:>12.3} {s:>11.4}");
    }
    println!(
        "knee k = {}{}, best silhouette k = {}",
        a.knee_k,
        if a.knee_flat { " (flat curve)" } else { "" },
        a.silhouette_k
    );
    println!("adjusted Rand index against the generating process: {:.3}", adjusted_rand_index(&a.labels, &truth));
    for w in &a.warnings {
        println!("warning: {w}");
    }
    Ok(())
}
