//! Slope-homogeneity test on a panel with a common trend and on one with
//! station-specific trends, plus the year-over-year profile correlation.
//!
//! cargo run --release --example homogeneity

use chrono::{Duration, NaiveDate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use poolcast::homogeneity::{pearson_profile_correlation, slope_homogeneity};
use poolcast::panel::PanelSeries;

fn trend_panel(slope_spread: f64, hours: usize, seed: u64) -> poolcast::Result<PanelSeries> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..100)
        .map(|_| {
            let slope = 0.01 + rng.random_range(-slope_spread..=slope_spread);
            let level: f64 = rng.random_range(1.0..4.0);
            let daily: f64 = rng.random_range(0.0..1.5);
            (0..hours)
                .map(|t| {
                    let e: f64 = rng.sample(StandardNormal);
                    let hod = (t % 24) as f64 / 24.0 * std::f64::consts::TAU;
                    level + slope * t as f64 / 24.0 + daily * hod.sin() + e
                })
                .collect()
        })
        .collect();
    let start = NaiveDate::from_ymd_opt(2021, 1, 1).unwrap().and_hms_opt(0, 0, 0).unwrap();
    PanelSeries::new((0..100).map(|i| format!("S{i:03}")).collect(), start, rows)
}

fn main() -> poolcast::Result<()> {
    for spread in [0.0, 0.005] {
        let panel = trend_panel(spread, 2 * 8_760, 1)?;
        let r = slope_homogeneity(&panel)?;
        println!(
            "slope spread {spread}: D = {:>8.3}, pooled slope {:.5}/h, reject at 5%: {}",
            r.d_tilde, r.pooled_slope, r.reject_at_5pct
        );
        let boundary = panel.start() + Duration::hours(8_760);
        let pc = pearson_profile_correlation(&panel, boundary)?;
        println!("  2021 vs 2022 network profile: r = {:.3} over {} month-day-hour keys", pc.r, pc.n_keys);
    }
    Ok(())
}
