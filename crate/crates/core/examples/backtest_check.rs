//! Online backtest of conformal regions: calibrate on the first examples,
//! then step through the test examples, recording the half-width used and
//! whether the realised value fell inside.
//!
//! ```bash
//! cargo run --example backtest_check
//! ```

use wnn_conformal::{backtest_scores, simulate_ets, split_sizes, EtsParams, ForecasterSpec, Result};

pub fn run() -> Result<()> {
    let series = simulate_ets(&EtsParams::ana(0.5, 0.2, 12).with_level(50.0), 300, 5)?;
    let n = 3;
    let split = split_sizes(series.len(), n, 0.05)?;
    let backtest = backtest_scores(&series, &ForecasterSpec::wnn(2, 4), n, &split)?;
    println!("I1 = {}, I2 = {}, test MAPE = {:.3}", split.i1, split.i2, backtest.test_mape()?);

    for delta in [0.05, 0.10, 0.20] {
        let report = backtest.check(delta)?;
        println!(
            "{:.0}%: coverage {:.1}%, per step {:.1?}, mean widths {:.2?}",
            report.confidence() * 100.0,
            report.overall_coverage,
            report.component_coverage,
            report.mean_width
        );
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
