//! Conformal prediction regions for multi-step forecasts.
//!
//! The series is cut into examples `z_t = (x_t, y_t)` where the object
//! `x_t = (a_{t-np+1}, .., a_t)` is the lagged window and the label
//! `y_t = (a_{t+1}, .., a_{t+n})` the next `n` values, for
//! `t = T-n, T-2n, ..`. Each example is scored by retraining the forecaster
//! on `a_1 .. a_t` and taking component-wise absolute errors. For a new
//! forecast, component `j` receives the interval `center_j +/- r_j`, where
//! `r_j` is the `s`-th largest of the `h` calibration scores in column `j`
//! and `s = floor(delta * (h + 1))`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{calibration_rank, check_delta, min_calibration, TimeSeries};
use crate::wnn::{point_forecast, ForecasterSpec};

/// One `(object, label)` example anchored at 1-based time `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pair {
    pub t: usize,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

/// Example pairs in chronological order (ascending `t`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairedDataset {
    pub n: usize,
    pub p: usize,
    /// Number of pairs: the largest `c` with `T - n*c >= n*p`.
    pub c: usize,
    pub pairs: Vec<Pair>,
}

pub fn make_pairs(series: &TimeSeries, n: usize, p: usize) -> Result<PairedDataset> {
    if n == 0 || p == 0 {
        return Err(Error::InvalidParams("n and p must be at least 1".into()));
    }
    let a = series.values();
    let t_len = a.len();
    let window = n * p;
    if t_len < window + n {
        return Err(Error::SeriesTooShort(format!(
            "T = {t_len} is below n*p + n = {}",
            window + n
        )));
    }
    let c = (t_len - window) / n;
    let pairs = (1..=c)
        .rev()
        .map(|i| {
            let t = t_len - i * n;
            Pair {
                t,
                x: a[t - window..t].to_vec(),
                y: a[t..t + n].to_vec(),
            }
        })
        .collect();
    Ok(PairedDataset { n, p, c, pairs })
}

/// Calibration scores: one row of `n` component scores per example, rows in
/// chronological order and tagged with their anchor time `t`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ScoreMatrix {
    n: usize,
    rows: Vec<Vec<f64>>,
    row_tags: Vec<usize>,
}

impl ScoreMatrix {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            rows: Vec::new(),
            row_tags: Vec::new(),
        }
    }

    /// Builds a matrix from untagged rows; tags are `1, 2, ..`.
    pub fn from_rows(n: usize, rows: Vec<Vec<f64>>) -> Result<Self> {
        let mut m = Self::new(n);
        for (i, row) in rows.into_iter().enumerate() {
            m.push(i + 1, row)?;
        }
        Ok(m)
    }

    pub fn push(&mut self, t: usize, row: Vec<f64>) -> Result<()> {
        if row.len() != self.n {
            return Err(Error::LengthMismatch {
                left: self.n,
                right: row.len(),
            });
        }
        if row.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidParams(format!(
                "scores must be finite and non-negative (row t = {t})"
            )));
        }
        if self.row_tags.last().is_some_and(|&last| t <= last) {
            return Err(Error::InvalidParams(format!(
                "score rows must be chronological; t = {t} follows t = {}",
                self.row_tags.last().unwrap()
            )));
        }
        self.rows.push(row);
        self.row_tags.push(t);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of rows.
    pub fn h(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn row_tags(&self) -> &[usize] {
        &self.row_tags
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[j]).collect()
    }
}

/// Absolute errors of the forecast made from `a_1 .. a_t` against the
/// realised `a_{t+1} .. a_{t+n}`.
pub fn nonconformity_scores(
    series: &[f64],
    t: usize,
    forecaster: &ForecasterSpec,
    n: usize,
) -> Result<Vec<f64>> {
    if t == 0 || t + n > series.len() {
        return Err(Error::InvalidParams(format!(
            "anchor t = {t} with horizon {n} does not fit a series of length {}",
            series.len()
        )));
    }
    let forecast = point_forecast(forecaster, &series[..t], n)?;
    Ok(series[t..t + n]
        .iter()
        .zip(&forecast)
        .map(|(a, f)| (a - f).abs())
        .collect())
}

/// Scores for the given anchors (ascending), computed in parallel and
/// assembled in order.
pub fn score_rows(
    series: &[f64],
    anchors: &[usize],
    forecaster: &ForecasterSpec,
    n: usize,
) -> Result<ScoreMatrix> {
    let rows: Vec<Result<Vec<f64>>> = anchors
        .par_iter()
        .map(|&t| nonconformity_scores(series, t, forecaster, n))
        .collect();
    let mut m = ScoreMatrix::new(n);
    for (&t, row) in anchors.iter().zip(rows) {
        m.push(t, row?)?;
    }
    Ok(m)
}

/// Conformal p-value of a candidate score against `h` calibration scores:
/// the share of the `h + 1` scores (candidate included) that are at least
/// as large as the candidate.
pub fn p_value(calibration_scores: &[f64], alpha_new: f64) -> f64 {
    let count = calibration_scores.iter().filter(|&&a| a >= alpha_new).count() + 1;
    count as f64 / (calibration_scores.len() + 1) as f64
}

/// The `s`-th largest value (1-based) of `values`.
pub fn kth_largest(values: &[f64], s: usize) -> f64 {
    assert!(s >= 1 && s <= values.len(), "rank {s} out of range");
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    sorted[s - 1]
}

/// Point forecast with symmetric per-component half-widths; the region is
/// the product of the component intervals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRegion {
    pub center: Vec<f64>,
    pub half_widths: Vec<f64>,
    pub delta: f64,
    /// Rank of the calibration score used as half-width.
    pub s: usize,
    /// Calibration size.
    pub h: usize,
}

impl PredictionRegion {
    pub fn lower(&self) -> Vec<f64> {
        self.center
            .iter()
            .zip(&self.half_widths)
            .map(|(c, r)| c - r)
            .collect()
    }

    pub fn upper(&self) -> Vec<f64> {
        self.center
            .iter()
            .zip(&self.half_widths)
            .map(|(c, r)| c + r)
            .collect()
    }

    pub fn widths(&self) -> Vec<f64> {
        self.half_widths.iter().map(|r| 2.0 * r).collect()
    }

    /// Membership with the closed comparison `|y_j - center_j| <= r_j`.
    pub fn contains(&self, y: &[f64]) -> bool {
        y.len() == self.center.len()
            && y
                .iter()
                .zip(self.center.iter().zip(&self.half_widths))
                .all(|(v, (c, r))| (v - c).abs() <= *r)
    }

    pub fn confidence(&self) -> f64 {
        1.0 - self.delta
    }
}

/// Builds the region around `center` from a calibration score matrix.
pub fn region_from_scores(center: Vec<f64>, scores: &ScoreMatrix, delta: f64) -> Result<PredictionRegion> {
    check_delta(delta)?;
    if center.len() != scores.n() {
        return Err(Error::LengthMismatch {
            left: scores.n(),
            right: center.len(),
        });
    }
    let h = scores.h();
    let s = calibration_rank(delta, h);
    if s == 0 {
        return Err(Error::InsufficientCalibration {
            have: h,
            required: min_calibration(delta),
            delta,
        });
    }
    let half_widths = (0..scores.n())
        .map(|j| kth_largest(&scores.column(j), s))
        .collect();
    Ok(PredictionRegion {
        center,
        half_widths,
        delta,
        s,
        h,
    })
}

/// Calibrates on the `h` most recent examples `t = T-n, .., T-h*n` and
/// returns the region for `a_{T+1} .. a_{T+n}`.
pub fn conformal_region(
    series: &TimeSeries,
    forecaster: &ForecasterSpec,
    n: usize,
    h: usize,
    delta: f64,
) -> Result<PredictionRegion> {
    check_delta(delta)?;
    if n == 0 {
        return Err(Error::InvalidParams("n must be at least 1".into()));
    }
    if calibration_rank(delta, h) == 0 {
        return Err(Error::InsufficientCalibration {
            have: h,
            required: min_calibration(delta),
            delta,
        });
    }
    let a = series.values();
    let t_len = a.len();
    if t_len <= h * n {
        return Err(Error::SeriesTooShort(format!(
            "T = {t_len} cannot hold {h} calibration examples of length {n}"
        )));
    }
    let anchors: Vec<usize> = (1..=h).rev().map(|i| t_len - i * n).collect();
    let scores = score_rows(a, &anchors, forecaster, n)?;
    let center = point_forecast(forecaster, a, n)?;
    region_from_scores(center, &scores, delta)
}
