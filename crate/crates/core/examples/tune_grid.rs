//! Grid search over window length `p` and neighbour count `k`, scored by
//! the fold-averaged MAPE of rolling-origin forecasts.
//!
//! ```bash
//! cargo run --example tune_grid
//! ```

use wnn_conformal::{fpto_tune, simulate_ets, EtsParams, Result, TuneGrid, Weighting};

pub fn run() -> Result<()> {
    let series = simulate_ets(&EtsParams::aada(0.7, 0.3, 0.2, 0.82, 12).with_level(100.0), 300, 11)?;
    let grid = TuneGrid::new((1..=6).collect(), (1..=8).collect())?;

    for weighting in [Weighting::Uniform, Weighting::InverseDistance] {
        let result = fpto_tune(series.values(), 2, 20, &grid, weighting)?;
        println!(
            "{weighting:>16}: p* = {}, k* = {}, MAPE* = {:.4}",
            result.p_star, result.k_star, result.objective
        );
        let mut cells = result.trace.clone();
        cells.sort_by(|a, b| a.mape_star.total_cmp(&b.mape_star));
        for cell in cells.iter().take(3) {
            println!("{:>18} p={} k={} {:.4}", "", cell.p, cell.k, cell.mape_star);
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
