//! Report payloads and their JSON, CSV and plain-text renderings.
//!
//! JSON output is wrapped in an envelope
//! `{ "config": .., "results": .., "provenance": { "seed", "version", "timestamp" } }`.
//! CSV output is one flat table per command, laid out so that the usual
//! width/coverage tables (per component and confidence level) can be read
//! straight off it.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::conformal::PredictionRegion;
use crate::error::{Error, Result};
use crate::eval::CheckReport;
use crate::series::SplitSpec;
use crate::wnn::{ForecasterSpec, TuneResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub seed: u64,
    pub version: &'static str,
    pub timestamp: Option<String>,
}

impl Provenance {
    pub fn new(seed: u64, with_timestamp: bool) -> Self {
        Self {
            seed,
            version: env!("CARGO_PKG_VERSION"),
            timestamp: with_timestamp.then(|| chrono::Utc::now().to_rfc3339()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Envelope<'a, C: Serialize, R: Serialize> {
    pub config: &'a C,
    pub results: &'a R,
    pub provenance: Provenance,
}

/// Tuned parameters without the full grid trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TuneSummary {
    pub p_star: usize,
    pub k_star: usize,
    pub objective: f64,
}

impl From<&TuneResult> for TuneSummary {
    fn from(r: &TuneResult) -> Self {
        Self {
            p_star: r.p_star,
            k_star: r.k_star,
            objective: r.objective,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuneOutput {
    pub split: SplitSpec,
    /// Length of the series prefix the grid search ran on.
    pub training_len: usize,
    pub result: TuneResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForecastOutput {
    pub split: SplitSpec,
    pub forecaster: ForecasterSpec,
    pub tuning: Option<TuneSummary>,
    /// One region per confidence level, ascending.
    pub regions: Vec<PredictionRegion>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutput {
    pub split: SplitSpec,
    pub forecaster: ForecasterSpec,
    pub tuning: Option<TuneSummary>,
    pub test_mape: f64,
    /// One report per confidence level, ascending.
    pub reports: Vec<CheckReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub forecaster: ForecasterSpec,
    pub mape: Option<f64>,
    pub reports: Vec<CheckReport>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareOutput {
    pub n: usize,
    pub split: SplitSpec,
    pub confidences: Vec<f64>,
    pub rows: Vec<CompareRow>,
}

pub fn write_json<W: Write, C: Serialize, R: Serialize>(
    mut w: W,
    config: &C,
    results: &R,
    provenance: Provenance,
) -> Result<()> {
    let env = Envelope {
        config,
        results,
        provenance,
    };
    serde_json::to_writer_pretty(&mut w, &env).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(w)?;
    Ok(())
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().flexible(false).from_writer(w)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

fn num(v: f64) -> String {
    v.to_string()
}

pub fn tune_csv<W: Write>(w: W, out: &TuneOutput) -> Result<()> {
    let mut w = csv_writer(w);
    w.write_record(["p", "k", "mape_star", "selected"]).map_err(csv_err)?;
    for c in &out.result.trace {
        let selected = c.p == out.result.p_star && c.k == out.result.k_star;
        w.write_record([
            c.p.to_string(),
            c.k.to_string(),
            num(c.mape_star),
            u8::from(selected).to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn tune_text<W: Write>(mut w: W, out: &TuneOutput) -> Result<()> {
    let r = &out.result;
    writeln!(
        w,
        "grid search on the first {} observations, {} folds",
        out.training_len, out.split.i1
    )?;
    writeln!(w, "p* = {}, k* = {}, MAPE* = {:.4}", r.p_star, r.k_star, r.objective)?;
    writeln!(w, "{} cells evaluated, {} infeasible", r.trace.len(), r.infeasible.len())?;
    writeln!(w, "{:>4} {:>4} {:>10}", "p", "k", "MAPE*")?;
    for c in &r.trace {
        writeln!(w, "{:>4} {:>4} {:>10.4}", c.p, c.k, c.mape_star)?;
    }
    Ok(())
}

pub fn forecast_csv<W: Write>(w: W, out: &ForecastOutput) -> Result<()> {
    let mut w = csv_writer(w);
    w.write_record(["confidence", "component", "center", "lower", "upper", "width"])
        .map_err(csv_err)?;
    for r in &out.regions {
        let (lo, hi) = (r.lower(), r.upper());
        for j in 0..r.center.len() {
            w.write_record([
                num(r.confidence()),
                (j + 1).to_string(),
                num(r.center[j]),
                num(lo[j]),
                num(hi[j]),
                num(2.0 * r.half_widths[j]),
            ])
            .map_err(csv_err)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn forecast_text<W: Write>(mut w: W, out: &ForecastOutput) -> Result<()> {
    writeln!(w, "forecaster: {}", out.forecaster)?;
    writeln!(w, "calibration examples: {}", out.split.i1 + out.split.i2)?;
    writeln!(
        w,
        "{:>10} {:>4} {:>12} {:>12} {:>12}",
        "confidence", "j", "lower", "center", "upper"
    )?;
    for r in &out.regions {
        let (lo, hi) = (r.lower(), r.upper());
        for j in 0..r.center.len() {
            writeln!(
                w,
                "{:>10.3} {:>4} {:>12.4} {:>12.4} {:>12.4}",
                r.confidence(),
                j + 1,
                lo[j],
                r.center[j],
                hi[j]
            )?;
        }
    }
    Ok(())
}

/// Rows: one per component and confidence level, plus an `all` row per
/// level carrying the overall coverage.
pub fn check_csv<W: Write>(w: W, out: &CheckOutput) -> Result<()> {
    let mut w = csv_writer(w);
    w.write_record([
        "component",
        "confidence",
        "method",
        "mean_width",
        "median_width",
        "coverage",
    ])
    .map_err(csv_err)?;
    let method = out.forecaster.name();
    for r in &out.reports {
        for j in 0..r.config.n {
            w.write_record([
                (j + 1).to_string(),
                num(r.confidence()),
                method.clone(),
                num(r.mean_width[j]),
                num(r.median_width[j]),
                num(r.component_coverage[j]),
            ])
            .map_err(csv_err)?;
        }
        w.write_record([
            "all".to_string(),
            num(r.confidence()),
            method.clone(),
            String::new(),
            String::new(),
            num(r.overall_coverage),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn check_text<W: Write>(mut w: W, out: &CheckOutput) -> Result<()> {
    writeln!(w, "forecaster: {}", out.forecaster)?;
    writeln!(
        w,
        "I1 = {}, I2 = {}, test MAPE = {:.4}",
        out.split.i1, out.split.i2, out.test_mape
    )?;
    writeln!(
        w,
        "{:>10} {:>4} {:>12} {:>12} {:>10}",
        "confidence", "j", "mean width", "median width", "coverage"
    )?;
    for r in &out.reports {
        for j in 0..r.config.n {
            writeln!(
                w,
                "{:>10.3} {:>4} {:>12.4} {:>12.4} {:>9.2}%",
                r.confidence(),
                j + 1,
                r.mean_width[j],
                r.median_width[j],
                r.component_coverage[j]
            )?;
        }
        writeln!(
            w,
            "{:>10.3} {:>4} {:>12} {:>12} {:>9.2}%",
            r.confidence(),
            "all",
            "",
            "",
            r.overall_coverage
        )?;
    }
    Ok(())
}

fn coverage_header(confidences: &[f64]) -> Vec<String> {
    confidences.iter().map(|c| format!("coverage@{c}")).collect()
}

pub fn compare_csv<W: Write>(w: W, out: &CompareOutput) -> Result<()> {
    let mut w = csv_writer(w);
    let mut header: Vec<String> = ["n", "i1", "i2", "method", "mape"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    header.extend(coverage_header(&out.confidences));
    w.write_record(&header).map_err(csv_err)?;
    for row in &out.rows {
        let mut rec = vec![
            out.n.to_string(),
            out.split.i1.to_string(),
            out.split.i2.to_string(),
            row.forecaster.name(),
            row.mape.map(num).unwrap_or_default(),
        ];
        if row.reports.is_empty() {
            rec.extend(out.confidences.iter().map(|_| String::new()));
        } else {
            rec.extend(row.reports.iter().map(|r| num(r.overall_coverage)));
        }
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn compare_text<W: Write>(mut w: W, out: &CompareOutput) -> Result<()> {
    writeln!(w, "n = {}, I1 = {}, I2 = {}", out.n, out.split.i1, out.split.i2)?;
    write!(w, "{:<24} {:>10}", "method", "MAPE")?;
    for c in &out.confidences {
        write!(w, " {:>10}", format!("{:.0}%", c * 100.0))?;
    }
    writeln!(w)?;
    for row in &out.rows {
        match (&row.error, row.mape) {
            (Some(e), _) => writeln!(w, "{:<24} error: {e}", row.forecaster.name())?,
            (None, Some(m)) => {
                write!(w, "{:<24} {:>10.4}", row.forecaster.name(), m)?;
                for r in &row.reports {
                    write!(w, " {:>10.2}", r.overall_coverage)?;
                }
                writeln!(w)?;
            }
            (None, None) => writeln!(w, "{:<24} -", row.forecaster.name())?,
        }
    }
    Ok(())
}
