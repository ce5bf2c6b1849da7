//! Online backtest of conformal regions.
//!
//! The last `I1 + I2` examples of the series (anchored every `n` steps) are
//! scored. The first `I1` rows seed the calibration matrix `P`. For each of
//! the `I2` test examples in turn, the half-widths `M[i]` are read off `P` at
//! rank `s = floor(delta * (I1 + i + 1))`, and only then is the test row
//! appended to `P`. `FIND[i][j]` records whether test score `(i, j)` is at
//! most `M[i][j]`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conformal::ScoreMatrix;
use crate::error::{Error, Result};
use crate::series::{calibration_rank, check_delta, mape, min_calibration, SplitSpec, TimeSeries};
use crate::wnn::{fpto_tune, point_forecast, ForecasterSpec, TuneGrid, TuneResult, Weighting};

/// Inputs echoed into every report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckConfig {
    /// `None` when the scores were supplied directly.
    pub forecaster: Option<ForecasterSpec>,
    pub n: usize,
    pub i1: usize,
    pub i2: usize,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub config: CheckConfig,
    /// `I2 x n` half-widths used for each test example.
    pub m: Vec<Vec<f64>>,
    /// `I2 x n` indicators, 1 when the test score is within the half-width.
    pub find: Vec<Vec<u8>>,
    /// Test-example scores, row-aligned with `m` and `find`.
    pub test_scores: Vec<Vec<f64>>,
    /// Anchor times of the test rows.
    pub test_tags: Vec<usize>,
    /// Percentage of all `(i, j)` cells covered.
    pub overall_coverage: f64,
    /// Percentage of test examples covered, per component.
    pub component_coverage: Vec<f64>,
    /// `2 * mean` of each column of `m`.
    pub mean_width: Vec<f64>,
    /// `2 * median` of each column of `m`.
    pub median_width: Vec<f64>,
}

impl CheckReport {
    pub fn confidence(&self) -> f64 {
        1.0 - self.config.delta
    }
}

/// Median, averaging the two central values for even lengths.
pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty());
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len().is_multiple_of(2) {
        (v[mid - 1] + v[mid]) / 2.0
    } else {
        v[mid]
    }
}

/// Runs the online check on precomputed scores.
pub fn check_scores(
    calibration: &ScoreMatrix,
    test: &ScoreMatrix,
    delta: f64,
    forecaster: Option<ForecasterSpec>,
) -> Result<CheckReport> {
    check_delta(delta)?;
    let n = calibration.n();
    if test.n() != n {
        return Err(Error::LengthMismatch {
            left: n,
            right: test.n(),
        });
    }
    let i1 = calibration.h();
    let i2 = test.h();
    if i2 == 0 {
        return Err(Error::InvalidParams("at least one test example is required".into()));
    }
    if calibration_rank(delta, i1) == 0 {
        return Err(Error::InfeasibleDelta {
            delta,
            min_i1: min_calibration(delta),
        });
    }

    // each column of P kept sorted descending
    let mut columns: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut c = calibration.column(j);
            c.sort_by(|a, b| b.total_cmp(a));
            c
        })
        .collect();

    let mut m = Vec::with_capacity(i2);
    let mut find = Vec::with_capacity(i2);
    for (i, row) in test.rows().iter().enumerate() {
        let s = calibration_rank(delta, i1 + i);
        let m_row: Vec<f64> = columns.iter().map(|c| c[s - 1]).collect();
        find.push(
            row.iter()
                .zip(&m_row)
                .map(|(score, half)| u8::from(score <= half))
                .collect::<Vec<u8>>(),
        );
        m.push(m_row);
        for (c, &v) in columns.iter_mut().zip(row) {
            let at = c.partition_point(|&x| x >= v);
            c.insert(at, v);
        }
    }

    let covered: usize = find.iter().flatten().map(|&f| f as usize).sum();
    let overall_coverage = 100.0 * covered as f64 / (n * i2) as f64;
    let component_coverage = (0..n)
        .map(|j| 100.0 * find.iter().map(|r| r[j] as usize).sum::<usize>() as f64 / i2 as f64)
        .collect();
    let mean_width = (0..n)
        .map(|j| 2.0 * m.iter().map(|r| r[j]).sum::<f64>() / i2 as f64)
        .collect();
    let median_width = (0..n)
        .map(|j| 2.0 * median(&m.iter().map(|r| r[j]).collect::<Vec<_>>()))
        .collect();

    Ok(CheckReport {
        config: CheckConfig {
            forecaster,
            n,
            i1,
            i2,
            delta,
        },
        m,
        find,
        test_scores: test.rows().to_vec(),
        test_tags: test.row_tags().to_vec(),
        overall_coverage,
        component_coverage,
        mean_width,
        median_width,
    })
}

/// Scores and forecasts for the calibration and test examples of a split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Backtest {
    pub forecaster: ForecasterSpec,
    pub n: usize,
    pub calibration: ScoreMatrix,
    pub test: ScoreMatrix,
    pub test_forecasts: Vec<Vec<f64>>,
    pub test_actuals: Vec<Vec<f64>>,
}

impl Backtest {
    /// MAPE of the point forecasts over all test examples.
    pub fn test_mape(&self) -> Result<f64> {
        let actual: Vec<f64> = self.test_actuals.iter().flatten().copied().collect();
        let predicted: Vec<f64> = self.test_forecasts.iter().flatten().copied().collect();
        mape(&actual, &predicted)
    }

    pub fn check(&self, delta: f64) -> Result<CheckReport> {
        check_scores(&self.calibration, &self.test, delta, Some(self.forecaster))
    }
}

/// Scores the `I1` calibration examples `t = T - n*I1 - n*I2, .., T - n*I2 - n`
/// and the `I2` test examples `t = T - n*I2, .., T - n`.
pub fn backtest_scores(
    series: &TimeSeries,
    forecaster: &ForecasterSpec,
    n: usize,
    split: &SplitSpec,
) -> Result<Backtest> {
    if n == 0 {
        return Err(Error::InvalidParams("n must be at least 1".into()));
    }
    let a = series.values();
    let t_len = a.len();
    let span = n * (split.i1 + split.i2);
    let needed = forecaster.min_history(n);
    if t_len < span + needed {
        return Err(Error::SeriesTooShort(format!(
            "T = {t_len}: the earliest calibration example needs {needed} observations of history \
             before the {span} scored values of {forecaster}"
        )));
    }
    let first = t_len - span;
    let anchors: Vec<usize> = (0..split.i1 + split.i2).map(|r| first + r * n).collect();

    let forecasts: Vec<Result<Vec<f64>>> = anchors
        .par_iter()
        .map(|&t| point_forecast(forecaster, &a[..t], n))
        .collect();

    let mut calibration = ScoreMatrix::new(n);
    let mut test = ScoreMatrix::new(n);
    let mut test_forecasts = Vec::with_capacity(split.i2);
    let mut test_actuals = Vec::with_capacity(split.i2);
    for (r, (&t, forecast)) in anchors.iter().zip(forecasts).enumerate() {
        let forecast = forecast?;
        let actual = &a[t..t + n];
        let row = actual.iter().zip(&forecast).map(|(y, f)| (y - f).abs()).collect();
        if r < split.i1 {
            calibration.push(t, row)?;
        } else {
            test.push(t, row)?;
            test_forecasts.push(forecast);
            test_actuals.push(actual.to_vec());
        }
    }
    Ok(Backtest {
        forecaster: *forecaster,
        n,
        calibration,
        test,
        test_forecasts,
        test_actuals,
    })
}

/// Backtests the forecaster's conformal regions at `split.delta`.
pub fn check_cp(
    series: &TimeSeries,
    forecaster: &ForecasterSpec,
    n: usize,
    split: &SplitSpec,
) -> Result<CheckReport> {
    backtest_scores(series, forecaster, n, split)?.check(split.delta)
}

/// Tunes `(p, k)` on the training region `a_1 .. a_{T - n*I2}` with `I1`
/// folds, as done before a backtest.
pub fn tune_on_training(
    series: &TimeSeries,
    n: usize,
    split: &SplitSpec,
    grid: &TuneGrid,
    weighting: Weighting,
) -> Result<TuneResult> {
    let a = series.values();
    let end = a.len().checked_sub(n * split.i2).ok_or_else(|| {
        Error::SeriesTooShort(format!("T = {} is shorter than the test set", a.len()))
    })?;
    fpto_tune(&a[..end], n, split.i1, grid, weighting)
}

/// One forecaster's outcome in a comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub forecaster: ForecasterSpec,
    pub mape: Option<f64>,
    pub report: Option<CheckReport>,
    pub error: Option<String>,
}

/// Test-set MAPE and backtest report for each forecaster. A failing
/// forecaster records its error without affecting the others.
pub fn compare_forecasters(
    series: &TimeSeries,
    specs: &[ForecasterSpec],
    n: usize,
    split: &SplitSpec,
) -> Vec<Comparison> {
    specs
        .iter()
        .map(|spec| {
            let outcome = backtest_scores(series, spec, n, split)
                .and_then(|b| Ok((b.test_mape()?, b.check(split.delta)?)));
            match outcome {
                Ok((mape, report)) => Comparison {
                    forecaster: *spec,
                    mape: Some(mape),
                    report: Some(report),
                    error: None,
                },
                Err(e) => Comparison {
                    forecaster: *spec,
                    mape: None,
                    report: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect()
}
