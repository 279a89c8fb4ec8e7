//! Turns a raw trip log into an hourly station panel.
//!
//! cargo run --example ingest

use std::fmt::Write as _;

use chrono::{Duration, NaiveDate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use poolcast::panel::{ingest_csv, InputFormat};

fn main() -> poolcast::Result<()> {
    let dir = std::env::temp_dir().join("poolcast-ingest-example");
    std::fs::create_dir_all(&dir).map_err(|e| poolcast::Error::io(&dir, e))?;

    // Bike-share style log: one row per trip, station ids as names, US timestamps.
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let t0 = NaiveDate::from_ymd_opt(2022, 6, 1).unwrap().and_hms_opt(0, 0, 0).unwrap();
    let stations = ["Clark & Lake", "State & Randolph", "Millennium Park", "Navy Pier"];
    let mut log = String::from("start_station,started_at,ride_id\n");
    for i in 0..5_000 {
        let s = stations[rng.random_range(0..stations.len())];
        let t = t0 + Duration::seconds(rng.random_range(0..7 * 24 * 3600));
        writeln!(log, "\"{s}\",{},{i}", t.format("%m/%d/%Y %H:%M:%S")).unwrap();
    }
    let events = dir.join("trips.csv");
    std::fs::write(&events, log).map_err(|e| poolcast::Error::io(&events, e))?;

    let format = InputFormat {
        station_column: "start_station".into(),
        timestamp_column: "started_at".into(),
        value_column: "trips".into(),
        timestamp_format: Some("%m/%d/%Y %H:%M:%S".into()),
    };
    let panel = ingest_csv(&events, &format)?;
    println!(
        "{} stations x {} hours, {} .. {}, {} trips",
        panel.n_stations(),
        panel.n_hours(),
        panel.start(),
        panel.end(),
        panel.total()
    );
    for (id, series) in panel.stations().iter().zip(panel.values()) {
        let busiest = series.iter().cloned().fold(0.0, f64::max);
        let empty = series.iter().filter(|&&v| v == 0.0).count();
        println!("  {id:<18} busiest hour {busiest:>3}, empty hours {empty}");
    }
    let out = dir.join("panel.csv");
    panel.write_csv(&out)?;
    println!("wrote {}", out.display());
    Ok(())
}
