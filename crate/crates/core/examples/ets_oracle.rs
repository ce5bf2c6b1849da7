//! Closed-form interval widths for simulated ETS models, checked against
//! the empirical spread of the simulated innovations.
//!
//! ```bash
//! cargo run --example ets_oracle
//! ```

use wnn_conformal::etssim::simulate_ets_path;
use wnn_conformal::{theoretical_width, EtsParams, Result};

pub fn run() -> Result<()> {
    let models = [
        ("ANA(0.5, 0.2)", EtsParams::ana(0.5, 0.2, 12)),
        ("AAdA(0.7, 0.3, 0.2, 0.82)", EtsParams::aada(0.7, 0.3, 0.2, 0.82, 12)),
    ];
    for (name, params) in &models {
        let widths: Vec<f64> = (1..=3)
            .map(|h| theoretical_width(params, h, 0.95))
            .collect::<Result<_>>()?;
        println!("{name:<26} 95% widths h=1..3: {widths:.3?}");

        let path = simulate_ets_path(params, 20_000, 1)?;
        let var = path
            .values
            .iter()
            .zip(&path.one_step_means)
            .map(|(v, m)| (v - m).powi(2))
            .sum::<f64>()
            / path.values.len() as f64;
        println!("{:<26} empirical one-step variance {var:.4} (sigma2 = {})", "", params.sigma2);
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
