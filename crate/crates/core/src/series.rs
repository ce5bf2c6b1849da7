//! Foundational types: the validated series, horizon/window configuration,
//! the calibration/test split, and the MAPE accuracy metric.
//!
//! Documentation uses 1-based time indices (`a_1 .. a_T`); storage is a
//! plain 0-based `Vec<f64>`, so `a_t` lives at `values[t - 1]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute slack used when flooring `delta * (h + 1)`, so that products
/// such as `0.05 * 20` that land a hair below an integer still round up.
const RANK_EPS: f64 = 1e-9;

/// A finite, non-empty univariate series with its seasonal period.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    values: Vec<f64>,
    period: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

impl TimeSeries {
    pub fn new(values: Vec<f64>, period: usize) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySeries);
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue { index });
        }
        if period == 0 {
            return Err(Error::InvalidPeriod(period));
        }
        Ok(Self {
            values,
            period,
            label: None,
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false; a `TimeSeries` holds at least one value.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// The first `len` observations as a new series with the same period.
    pub fn prefix(&self, len: usize) -> Result<Self> {
        let len = len.min(self.values.len());
        let mut s = TimeSeries::new(self.values[..len].to_vec(), self.period)?;
        s.label = self.label.clone();
        Ok(s)
    }
}

impl AsRef<[f64]> for TimeSeries {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}

/// Checks the raw observations and wraps them in a [`TimeSeries`].
pub fn validate_series(raw: &[f64], period: usize) -> Result<TimeSeries> {
    TimeSeries::new(raw.to_vec(), period)
}

/// Forecast horizon `n`, window multiplier `p` and neighbour count `k`.
///
/// The lagged object window has length `n * p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HorizonConfig {
    pub n: usize,
    pub p: usize,
    pub k: usize,
}

impl HorizonConfig {
    pub fn new(n: usize, p: usize, k: usize) -> Result<Self> {
        if n == 0 || p == 0 || k == 0 {
            return Err(Error::InvalidParams(format!(
                "n, p and k must all be at least 1 (got n={n}, p={p}, k={k})"
            )));
        }
        Ok(Self { n, p, k })
    }

    pub fn window_len(&self) -> usize {
        self.n * self.p
    }
}

/// Sizes of the calibration (`i1`) and test (`i2`) example sets together
/// with the significance level they were sized for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub i1: usize,
    pub i2: usize,
    pub delta: f64,
}

impl SplitSpec {
    pub fn new(i1: usize, i2: usize, delta: f64) -> Result<Self> {
        check_delta(delta)?;
        if i2 == 0 {
            return Err(Error::InvalidParams("I2 must be at least 1".into()));
        }
        let min_i1 = min_calibration(delta);
        if i1 < min_i1 {
            return Err(Error::InfeasibleDelta { delta, min_i1 });
        }
        Ok(Self { i1, i2, delta })
    }
}

pub(crate) fn check_delta(delta: f64) -> Result<()> {
    if delta.is_finite() && delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!(
            "significance level must lie in (0, 1), got {delta}"
        )))
    }
}

/// The conformal rank `s = floor(delta * (h + 1))` for `h` calibration scores.
pub fn calibration_rank(delta: f64, h: usize) -> usize {
    (delta * (h as f64 + 1.0) + RANK_EPS).floor() as usize
}

/// Smallest calibration size `h` for which [`calibration_rank`] is at least 1,
/// i.e. the smallest integer `h >= 1/delta - 1`.
pub fn min_calibration(delta: f64) -> usize {
    let guess = (1.0 / delta - 1.0).ceil().max(1.0) as usize;
    // settle float noise around the boundary
    let mut h = guess.saturating_sub(1).max(1);
    while calibration_rank(delta, h) < 1 {
        h += 1;
    }
    h
}

/// Mean absolute percentage error, in percent.
pub fn mape(actual: &[f64], predicted: &[f64]) -> Result<f64> {
    if actual.len() != predicted.len() {
        return Err(Error::LengthMismatch {
            left: actual.len(),
            right: predicted.len(),
        });
    }
    if actual.is_empty() {
        return Err(Error::EmptySeries);
    }
    let mut total = 0.0;
    for (index, (&a, &p)) in actual.iter().zip(predicted).enumerate() {
        if a == 0.0 {
            return Err(Error::ZeroActual { index });
        }
        total += ((p - a) / a).abs();
    }
    Ok(100.0 * total / actual.len() as f64)
}

/// Calibration/test sizes for a series of length `t_len` forecast `n` steps
/// at a time.
///
/// The test set covers about 20% of the data (`I2 = ceil(T / 5n)`), the
/// calibration set 20% of what remains (`I1 = ceil((T - n*I2) / 5n)`),
/// raised to the smallest size that keeps the conformal rank at least 1.
/// Integer arithmetic keeps exact multiples (e.g. `T = 300, n = 3`) exact.
pub fn split_sizes(t_len: usize, n: usize, delta: f64) -> Result<SplitSpec> {
    check_delta(delta)?;
    if t_len == 0 {
        return Err(Error::EmptySeries);
    }
    if n == 0 {
        return Err(Error::InvalidParams("n must be at least 1".into()));
    }
    let fifth = 5 * n;
    let i2 = t_len.div_ceil(fifth);
    let remaining = t_len.checked_sub(n * i2).filter(|&r| r > 0).ok_or_else(|| {
        Error::SeriesTooShort(format!("T = {t_len} leaves no data before the test set"))
    })?;
    let i1 = remaining.div_ceil(fifth).max(min_calibration(delta));
    let used = n * (i1 + i2);
    if t_len < used + n {
        return Err(Error::SeriesTooShort(format!(
            "T = {t_len} cannot hold {i1} calibration and {i2} test examples of length {n} plus training data"
        )));
    }
    Ok(SplitSpec { i1, i2, delta })
}
