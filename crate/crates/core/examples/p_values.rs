//! Conformal p-values for candidate values and the region they induce:
//! a candidate is in the region exactly when its p-value exceeds delta.
//!
//! ```bash
//! cargo run --example p_values
//! ```

use wnn_conformal::{p_value, region_from_scores, Result, ScoreMatrix};

pub fn run() -> Result<()> {
    let scores: Vec<f64> = (1..=19).map(|i| f64::from(i) * 0.5).collect();
    let calibration = ScoreMatrix::from_rows(1, scores.iter().map(|&s| vec![s]).collect())?;
    let center = 10.0;
    let delta = 0.1;
    let region = region_from_scores(vec![center], &calibration, delta)?;
    println!(
        "h = {}, rank s = {}, region [{:.2}, {:.2}]",
        region.h,
        region.s,
        region.lower()[0],
        region.upper()[0]
    );

    for candidate in [10.0, 12.0, 18.5, 19.0, 19.1, 25.0] {
        let p = p_value(&scores, (candidate - center).abs());
        println!(
            "y = {candidate:>5.1}  p = {p:.3}  p > delta: {:<5}  in region: {}",
            p > delta,
            region.contains(&[candidate])
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
