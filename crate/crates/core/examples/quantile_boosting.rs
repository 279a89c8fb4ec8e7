//! Trains a 95% interval model on a pooled station panel, evaluates it on
//! held-out hours and round-trips one forest through JSON.
//!
//! cargo run --release --example quantile_boosting

use poolcast::dgp::{reference, simulate_panel, PanelSimOptions};
use poolcast::metrics::{IntervalReport, ForecastTriplet};
use poolcast::panel::build_design_matrix;
use poolcast::qboost::{fit, train_interval, QuantileForest, TrainParams};

fn main() -> poolcast::Result<()> {
    let stations: Vec<(String, f64)> = (0..20).map(|i| (format!("S{i:02}"), 1.0)).collect();
    let panel = simulate_panel(&reference::ar_t(), &stations, &PanelSimOptions::new(3_000, 5))?;
    let design = build_design_matrix(&panel)?;
    println!("design: {} rows, columns {:?}", design.n_rows(), design.features.names());

    let (train, test) = design.split_at_hour(1_500);
    let params = TrainParams {
        n_rounds: 150,
        num_leaves: 31,
        ..TrainParams::default()
    };
    let model = train_interval(&train.features, &train.target, &params)?;
    let p = model.predict(&test.features)?;
    let triplet = ForecastTriplet::new(p.lower, p.median, p.upper, test.target.clone())?;
    let r = IntervalReport::evaluate(&triplet, "ar_t", "global", "global");
    println!(
        "held out: PICP {:.4}, PINAW {:.4}, median MSE {:.5}, crossing rate {:.4} over {} rows",
        r.picp,
        r.pinaw.unwrap_or(f64::NAN),
        r.mse_median,
        r.crossing_rate,
        r.n
    );

    let out = fit(&train.features, &train.target, &params.with_quantile(0.9))?;
    let h = &out.loss_history;
    println!("q0.9 training loss: {:.5} -> {:.5} after {} trees", h[0], h[h.len() - 1], out.forest.trees.len());
    let json = out.forest.to_json()?;
    let back = QuantileForest::from_json(&json)?;
    assert_eq!(back.predict(&test.features)?, out.forest.predict(&test.features)?);
    println!("JSON round trip: {} bytes, identical predictions", json.len());
    Ok(())
}
