//! Forecast the next three values of a simulated seasonal series and wrap
//! them in conformal intervals at 90% and 95%.
//!
//! ```bash
//! cargo run --example forecast_intervals
//! ```

use wnn_conformal::{
    conformal_region, simulate_ets, split_sizes, tune_on_training, EtsParams, ForecasterSpec, Result,
    TuneGrid, Weighting,
};

pub fn run() -> Result<()> {
    let series = simulate_ets(&EtsParams::ana(0.5, 0.2, 12), 300, 7)?;
    let n = 3;
    let split = split_sizes(series.len(), n, 0.05)?;
    let tuned = tune_on_training(&series, n, &split, &TuneGrid::default(), Weighting::default())?;
    let spec = ForecasterSpec::wnn(tuned.p_star, tuned.k_star);
    println!("{spec}, calibrated on {} examples", split.i1 + split.i2);

    for confidence in [0.90, 0.95] {
        let region = conformal_region(&series, &spec, n, split.i1 + split.i2, 1.0 - confidence)?;
        for (j, (lo, hi)) in region.lower().iter().zip(region.upper()).enumerate() {
            println!(
                "{:.0}%  a[T+{}]: {:>8.3} in [{lo:.3}, {hi:.3}]",
                confidence * 100.0,
                j + 1,
                region.center[j]
            );
        }
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
