//! Simulates each reference process and checks the draws against the
//! process definition.
//!
//! cargo run --release --example simulate

use poolcast::dgp::{fit_ar_ols, load_dgp, reference, simulate, simulate_panel, PanelSimOptions, SimConfig};
use poolcast::stats::{mean, variance};

fn main() -> poolcast::Result<()> {
    println!("{:<10} {:>10} {:>10} {:>10}", "dgp", "mean", "target", "sd");
    for (name, spec) in reference::NAMES.iter().zip(reference::all()) {
        let x = simulate(&spec, &SimConfig::new(50_000, 1, 1.0))?;
        let target = spec.stationary_mean().map_or("-".to_string(), |m| format!("{m:.4}"));
        println!("{name:<10} {:>10.4} {target:>10} {:>10.4}", mean(&x), variance(&x).sqrt());
    }

    let ar_t = reference::ar_t();
    let x = simulate(&ar_t, &SimConfig::new(100_000, 2, 1.0))?;
    let fit = fit_ar_ols(&x, &[1, 2, 3, 4])?;
    println!("\nar_t OLS refit: mu {:.4}, phi {:.3?}, sigma {:.4}", fit.mu, fit.phi, fit.sigma);
    println!("         truth: {ar_t:?}");

    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs/garch_dgp.toml");
    let garch = load_dgp(path.as_ref())?;
    let stations: Vec<(String, f64)> = (0..5).map(|i| (format!("S{i}"), 1.0)).collect();
    let panel = simulate_panel(&garch, &stations, &PanelSimOptions::new(24 * 7, 3))?;
    println!("\n{} from {path}:", garch.label());
    for (id, s) in panel.stations().iter().zip(panel.values()) {
        println!("  {id}: first hours {:.3?}", &s[..6]);
    }
    Ok(())
}
