//! Side-by-side backtest of nearest neighbours and a seasonal naive
//! baseline on the same split.
//!
//! ```bash
//! cargo run --example compare_forecasters
//! ```

use wnn_conformal::{compare_forecasters, simulate_ets, split_sizes, EtsParams, ForecasterSpec, Result};

pub fn run() -> Result<()> {
    let series = simulate_ets(&EtsParams::ana(0.3, 0.1, 12).with_level(80.0), 400, 2)?;
    let n = 1;
    let split = split_sizes(series.len(), n, 0.05)?;
    let specs = [
        ForecasterSpec::wnn(3, 5),
        ForecasterSpec::seasonal_naive(12),
        // deliberately too long a window: reported, not fatal
        ForecasterSpec::wnn(300, 12),
    ];
    for row in compare_forecasters(&series, &specs, n, &split) {
        match (row.mape, row.report, row.error) {
            (Some(mape), Some(report), _) => println!(
                "{:<22} MAPE {mape:>7.3}  coverage {:>5.1}%  mean width {:.3}",
                row.forecaster.name(),
                report.overall_coverage,
                report.mean_width[0]
            ),
            (_, _, Some(e)) => println!("{:<22} failed: {e}", row.forecaster.name()),
            _ => unreachable!(),
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
