//! Interval metrics on small hand-made forecasts.
//!
//! cargo run --example metrics

use poolcast::metrics::{mse_median, picp, pinaw, write_reports, ForecastTriplet, IntervalReport};

fn main() -> poolcast::Result<()> {
    let wide = ForecastTriplet::new(vec![0.0; 4], vec![2.0; 4], vec![4.0; 4], vec![0.0, 1.0, 4.0, 5.0])?;
    let narrow = ForecastTriplet::new(
        vec![0.5, 0.5, 3.5, 4.5],
        vec![1.0, 1.0, 4.0, 5.0],
        vec![1.5, 1.5, 4.5, 5.5],
        vec![0.0, 1.0, 4.0, 5.0],
    )?;
    for (name, t) in [("wide", &wide), ("narrow", &narrow)] {
        println!(
            "{name:<7} PICP {:.2}  PINAW {:.3}  MSE {:.3}",
            picp(t),
            pinaw(t)?,
            mse_median(t)
        );
    }

    let flat = ForecastTriplet::new(vec![0.0; 3], vec![1.0; 3], vec![2.0; 3], vec![1.0; 3])?;
    println!("constant observations: PINAW {:?}", pinaw(&flat).map_err(|e| e.to_string()));

    let reports: Vec<IntervalReport> = [("wide", &wide), ("narrow", &narrow), ("flat", &flat)]
        .into_iter()
        .map(|(scope, t)| IntervalReport::evaluate(t, "hand", "station", scope))
        .collect();
    write_reports(std::io::stdout().lock(), &reports).map_err(|e| poolcast::Error::io("<stdout>", e))?;
    Ok(())
}
