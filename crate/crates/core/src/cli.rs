//! Command-line workflows: `tune`, `forecast`, `check`, `simulate` and
//! `compare`.
//!
//! Confidence levels are what users pass (`--confidence 0.95`); internally
//! the significance level is `delta = 1 - confidence`. When several levels
//! are requested the calibration/test split is sized for the highest one, so
//! every level shares the same split and tuned parameters.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::Serialize;

use crate::conformal::conformal_region;
use crate::error::{Error, Result};
use crate::etssim::{simulate_ets, EtsParams};
use crate::eval::{backtest_scores, tune_on_training};
use crate::io::{load_csv, write_series_csv};
use crate::report::{
    self, CheckOutput, CompareOutput, CompareRow, ForecastOutput, Format, Provenance, TuneOutput,
    TuneSummary,
};
use crate::series::{split_sizes, SplitSpec, TimeSeries};
use crate::wnn::{ForecasterSpec, TuneGrid, Weighting};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Grid-search p and k on the training region.
    Tune,
    /// Prediction regions for the values following the series.
    Forecast,
    /// Backtest region coverage and width on held-out examples.
    Check,
    /// Write a simulated ETS series as CSV.
    Simulate,
    /// Compare WNN against a seasonal-naive baseline.
    Compare,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModelArg {
    Ana,
    Aada,
}

#[derive(Debug, Clone, PartialEq, Serialize, Parser)]
#[command(name = "wnncp", version, about = "Nearest-neighbour forecasts with conformal prediction regions")]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,

    /// CSV input file, or `-` for standard input.
    #[arg(long, default_value = "-")]
    pub input: PathBuf,

    /// Column to read, by header name or 0-based index.
    #[arg(long, default_value = "value")]
    pub column: String,

    /// Seasonal period.
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..))]
    pub period: u64,

    /// Number of values predicted per step.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,

    /// Confidence level in (0, 1); repeatable.
    #[arg(long = "confidence", value_parser = parse_unit, default_values_t = vec![0.95])]
    pub confidences: Vec<f64>,

    /// Window multipliers to search, e.g. `1..12` or `1,2,4`.
    #[arg(long, default_value = "1..12", value_parser = parse_grid)]
    pub p_grid: GridList,

    /// Neighbour counts to search.
    #[arg(long, default_value = "1..12", value_parser = parse_grid)]
    pub k_grid: GridList,

    /// Fixed window multiplier (skips tuning together with --k).
    #[arg(long, requires = "k", value_parser = clap::value_parser!(u64).range(1..))]
    pub p: Option<u64>,

    /// Fixed neighbour count (skips tuning together with --p).
    #[arg(long, requires = "p", value_parser = clap::value_parser!(u64).range(1..))]
    pub k: Option<u64>,

    #[arg(long, default_value = "inverse-distance", value_parser = clap::value_parser!(Weighting))]
    pub weighting: Weighting,

    /// Random seed for `simulate`.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Output file; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,

    /// Leave the timestamp out of JSON reports (byte-identical reruns).
    #[arg(long)]
    pub no_timestamp: bool,

    /// ETS model for `simulate`.
    #[arg(long, value_enum, default_value_t = ModelArg::Ana)]
    pub model: ModelArg,

    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,

    #[arg(long, default_value_t = 0.3)]
    pub beta: f64,

    #[arg(long, default_value_t = 0.2)]
    pub gamma: f64,

    #[arg(long, default_value_t = 0.82)]
    pub phi: f64,

    #[arg(long, default_value_t = 1.0)]
    pub sigma2: f64,

    /// Length of the simulated series.
    #[arg(long, default_value_t = 300)]
    pub length: usize,
}

/// Values of one tuning-grid axis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct GridList(pub Vec<usize>);

fn parse_unit(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(format!("{v} is outside (0, 1)"))
    }
}

/// Parses `a..b`, `a..=b` or `a-b` (inclusive ranges) and comma lists.
pub fn parse_grid(s: &str) -> std::result::Result<GridList, String> {
    let bad = || format!("invalid grid `{s}`; use e.g. `1..12` or `1,2,4`");
    let int = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    let range = s
        .split_once("..=")
        .or_else(|| s.split_once(".."))
        .or_else(|| s.split_once('-'));
    let values: Vec<usize> = match range {
        Some((lo, hi)) => {
            let (lo, hi) = (int(lo)?, int(hi)?);
            if lo > hi {
                return Err(bad());
            }
            (lo..=hi).collect()
        }
        None => s.split(',').map(int).collect::<std::result::Result<_, _>>()?,
    };
    if values.is_empty() || values.contains(&0) {
        return Err(bad());
    }
    Ok(GridList(values))
}

impl RunConfig {
    /// Defaults for `command`, as if no flags were given.
    pub fn new(command: Command) -> Self {
        let name = match command {
            Command::Tune => "tune",
            Command::Forecast => "forecast",
            Command::Check => "check",
            Command::Simulate => "simulate",
            Command::Compare => "compare",
        };
        RunConfig::parse_from(["wnncp", name])
    }

    fn n(&self) -> usize {
        self.n as usize
    }

    /// Confidence levels sorted ascending, duplicates removed.
    fn levels(&self) -> Vec<f64> {
        let mut c = self.confidences.clone();
        c.sort_by(f64::total_cmp);
        c.dedup();
        c
    }

    fn smallest_delta(&self) -> f64 {
        let levels = self.levels();
        1.0 - levels.last().copied().unwrap_or(0.95)
    }

    pub fn ets_params(&self) -> EtsParams {
        let m = self.period as usize;
        let p = match self.model {
            ModelArg::Ana => EtsParams::ana(self.alpha, self.gamma, m),
            ModelArg::Aada => EtsParams::aada(self.alpha, self.beta, self.gamma, self.phi, m),
        };
        p.with_sigma2(self.sigma2)
    }

    fn grid(&self) -> Result<TuneGrid> {
        TuneGrid::new(self.p_grid.0.clone(), self.k_grid.0.clone())
    }
}

struct Prepared {
    series: TimeSeries,
    split: SplitSpec,
    forecaster: ForecasterSpec,
    tuning: Option<TuneSummary>,
}

fn prepare(config: &RunConfig) -> Result<Prepared> {
    let series = load_csv(&config.input, &config.column, config.period as usize)?;
    let n = config.n();
    let split = split_sizes(series.len(), n, config.smallest_delta())?;
    let (forecaster, tuning) = match (config.p, config.k) {
        (Some(p), Some(k)) => (
            ForecasterSpec::Wnn {
                p: p as usize,
                k: k as usize,
                weighting: config.weighting,
            },
            None,
        ),
        _ => {
            let tuned = tune_on_training(&series, n, &split, &config.grid()?, config.weighting)?;
            (
                ForecasterSpec::Wnn {
                    p: tuned.p_star,
                    k: tuned.k_star,
                    weighting: config.weighting,
                },
                Some(TuneSummary::from(&tuned)),
            )
        }
    };
    Ok(Prepared {
        series,
        split,
        forecaster,
        tuning,
    })
}

/// Runs the configured workflow, writing to `--output` or standard output.
pub fn run(config: &RunConfig) -> Result<()> {
    match &config.output {
        Some(path) => {
            let file = File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            run_to(config, &mut w)?;
            w.flush()?;
            Ok(())
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            run_to(config, &mut w)
        }
    }
}

/// Runs the configured workflow, writing the artefact to `w`.
pub fn run_to<W: Write>(config: &RunConfig, w: &mut W) -> Result<()> {
    let provenance = Provenance::new(config.seed, !config.no_timestamp);
    let n = config.n();
    match config.command {
        Command::Simulate => {
            let series = simulate_ets(&config.ets_params(), config.length, config.seed)?;
            write_series_csv(w, series.values())
        }
        Command::Tune => {
            let series = load_csv(&config.input, &config.column, config.period as usize)?;
            let split = split_sizes(series.len(), n, config.smallest_delta())?;
            let result = tune_on_training(&series, n, &split, &config.grid()?, config.weighting)?;
            let out = TuneOutput {
                split,
                training_len: series.len() - n * split.i2,
                result,
            };
            match config.format {
                Format::Json => report::write_json(w, config, &out, provenance),
                Format::Csv => report::tune_csv(w, &out),
                Format::Text => report::tune_text(w, &out),
            }
        }
        Command::Forecast => {
            let prep = prepare(config)?;
            let h = prep.split.i1 + prep.split.i2;
            let regions = config
                .levels()
                .into_iter()
                .map(|c| conformal_region(&prep.series, &prep.forecaster, n, h, 1.0 - c))
                .collect::<Result<Vec<_>>>()?;
            let out = ForecastOutput {
                split: prep.split,
                forecaster: prep.forecaster,
                tuning: prep.tuning,
                regions,
            };
            match config.format {
                Format::Json => report::write_json(w, config, &out, provenance),
                Format::Csv => report::forecast_csv(w, &out),
                Format::Text => report::forecast_text(w, &out),
            }
        }
        Command::Check => {
            let prep = prepare(config)?;
            let backtest = backtest_scores(&prep.series, &prep.forecaster, n, &prep.split)?;
            let reports = config
                .levels()
                .into_iter()
                .map(|c| backtest.check(1.0 - c))
                .collect::<Result<Vec<_>>>()?;
            let out = CheckOutput {
                split: prep.split,
                forecaster: prep.forecaster,
                tuning: prep.tuning,
                test_mape: backtest.test_mape()?,
                reports,
            };
            match config.format {
                Format::Json => report::write_json(w, config, &out, provenance),
                Format::Csv => report::check_csv(w, &out),
                Format::Text => report::check_text(w, &out),
            }
        }
        Command::Compare => {
            let prep = prepare(config)?;
            let specs = [
                prep.forecaster,
                ForecasterSpec::seasonal_naive(config.period as usize),
            ];
            let levels = config.levels();
            let rows = specs
                .iter()
                .map(|spec| {
                    let outcome = backtest_scores(&prep.series, spec, n, &prep.split).and_then(|b| {
                        let reports = levels
                            .iter()
                            .map(|c| b.check(1.0 - c))
                            .collect::<Result<Vec<_>>>()?;
                        Ok((b.test_mape()?, reports))
                    });
                    match outcome {
                        Ok((mape, reports)) => CompareRow {
                            forecaster: *spec,
                            mape: Some(mape),
                            reports,
                            error: None,
                        },
                        Err(e) => CompareRow {
                            forecaster: *spec,
                            mape: None,
                            reports: Vec::new(),
                            error: Some(e.to_string()),
                        },
                    }
                })
                .collect();
            let out = CompareOutput {
                n,
                split: prep.split,
                confidences: levels,
                rows,
            };
            match config.format {
                Format::Json => report::write_json(w, config, &out, provenance),
                Format::Csv => report::compare_csv(w, &out),
                Format::Text => report::compare_text(w, &out),
            }
        }
    }
}
