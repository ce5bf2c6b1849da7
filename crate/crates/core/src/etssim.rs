//! Simulation of additive exponential smoothing state-space models and their
//! closed-form forecast variances.
//!
//! Two models are covered: additive error with no trend and additive
//! seasonality (`Ana`), and additive error with a damped additive trend and
//! additive seasonality (`AAdA`). With innovations `e_t ~ N(0, sigma2)`:
//!
//! ```text
//! a_t = l_{t-1} + phi * b_{t-1} + s_{t-m} + e_t
//! l_t = l_{t-1} + phi * b_{t-1} + alpha * e_t
//! b_t = phi * b_{t-1} + beta * e_t
//! s_t = s_{t-m} + gamma * e_t
//! ```
//!
//! `Ana` is the same recursion with the trend terms removed. Normal draws
//! come from `ChaCha8Rng::seed_from_u64(seed)` through `rand_distr`'s
//! `StandardNormal`, one draw per time step, so a seed fixes the series.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::series::TimeSeries;

pub const DEFAULT_LEVEL: f64 = 100.0;
pub const DEFAULT_SEASONAL_AMPLITUDE: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EtsKind {
    /// Additive error, no trend, additive seasonality.
    Ana,
    /// Additive error, damped additive trend, additive seasonality.
    AAdA,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EtsParams {
    pub kind: EtsKind,
    pub alpha: f64,
    /// Ignored for [`EtsKind::Ana`].
    pub beta: f64,
    pub gamma: f64,
    /// Ignored for [`EtsKind::Ana`].
    pub phi: f64,
    pub sigma2: f64,
    pub m: usize,
    pub init_level: f64,
    /// Ignored for [`EtsKind::Ana`].
    pub init_trend: f64,
    /// Seasonal states `s_{1-m} .. s_0`; entry `i` applies to `t = i + 1`.
    pub init_seasonal: Vec<f64>,
}

/// `amplitude * sin(2 pi i / m)` for `i = 0..m`, recentred to sum to zero.
pub fn sinusoid_seasonal(m: usize, amplitude: f64) -> Vec<f64> {
    let raw: Vec<f64> = (0..m)
        .map(|i| amplitude * (2.0 * std::f64::consts::PI * i as f64 / m as f64).sin())
        .collect();
    let mean = raw.iter().sum::<f64>() / m.max(1) as f64;
    raw.into_iter().map(|v| v - mean).collect()
}

impl EtsParams {
    /// ETS(A,N,A) with unit innovation variance, level 100 and an
    /// amplitude-10 sinusoidal seasonal pattern.
    pub fn ana(alpha: f64, gamma: f64, m: usize) -> Self {
        Self {
            kind: EtsKind::Ana,
            alpha,
            beta: 0.0,
            gamma,
            phi: 1.0,
            sigma2: 1.0,
            m,
            init_level: DEFAULT_LEVEL,
            init_trend: 0.0,
            init_seasonal: sinusoid_seasonal(m, DEFAULT_SEASONAL_AMPLITUDE),
        }
    }

    /// ETS(A,Ad,A) with the same defaults as [`EtsParams::ana`] and an
    /// initial trend of 1.
    pub fn aada(alpha: f64, beta: f64, gamma: f64, phi: f64, m: usize) -> Self {
        Self {
            kind: EtsKind::AAdA,
            beta,
            phi,
            init_trend: 1.0,
            ..Self::ana(alpha, gamma, m)
        }
    }

    pub fn with_sigma2(mut self, sigma2: f64) -> Self {
        self.sigma2 = sigma2;
        self
    }

    pub fn with_level(mut self, level: f64) -> Self {
        self.init_level = level;
        self
    }

    pub fn with_trend(mut self, trend: f64) -> Self {
        self.init_trend = trend;
        self
    }

    pub fn with_seasonal(mut self, seasonal: Vec<f64>) -> Self {
        self.init_seasonal = seasonal;
        self
    }

    /// Checks parameter ranges. The smoothing parameters are required to lie
    /// in `[0, 1)`, which admits the frozen-state case `alpha = gamma = 0`.
    pub fn validate(&self) -> Result<()> {
        let unit = |name: &str, v: f64| {
            if (0.0..1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::InvalidParams(format!("{name} must lie in [0, 1), got {v}")))
            }
        };
        unit("alpha", self.alpha)?;
        unit("gamma", self.gamma)?;
        if self.kind == EtsKind::AAdA {
            unit("beta", self.beta)?;
            unit("phi", self.phi)?;
        }
        if !(self.sigma2.is_finite() && self.sigma2 >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "sigma2 must be finite and non-negative, got {}",
                self.sigma2
            )));
        }
        if self.m == 0 {
            return Err(Error::InvalidPeriod(0));
        }
        if self.init_seasonal.len() != self.m {
            return Err(Error::InvalidParams(format!(
                "init_seasonal has {} entries, expected m = {}",
                self.init_seasonal.len(),
                self.m
            )));
        }
        let sum: f64 = self.init_seasonal.iter().sum();
        let scale = self.init_seasonal.iter().map(|v| v.abs()).sum::<f64>().max(1.0);
        if sum.abs() > 1e-9 * scale {
            return Err(Error::InvalidParams(format!(
                "init_seasonal must sum to zero (sums to {sum})"
            )));
        }
        if !self.init_level.is_finite() || !self.init_trend.is_finite() {
            return Err(Error::InvalidParams("initial states must be finite".into()));
        }
        Ok(())
    }
}

/// A simulated path with the one-step-ahead conditional means, so that
/// `values[i] - one_step_means[i]` is the innovation at step `i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct EtsPath {
    pub values: Vec<f64>,
    pub one_step_means: Vec<f64>,
}

pub fn simulate_ets_path(params: &EtsParams, t_len: usize, seed: u64) -> Result<EtsPath> {
    params.validate()?;
    if t_len == 0 {
        return Err(Error::InvalidParams("series length must be at least 1".into()));
    }
    let (beta, phi, mut trend) = match params.kind {
        EtsKind::Ana => (0.0, 0.0, 0.0),
        EtsKind::AAdA => (params.beta, params.phi, params.init_trend),
    };
    let sigma = params.sigma2.sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut level = params.init_level;
    let mut seasonal = params.init_seasonal.clone();
    let mut values = Vec::with_capacity(t_len);
    let mut one_step_means = Vec::with_capacity(t_len);
    for t in 0..t_len {
        let z: f64 = StandardNormal.sample(&mut rng);
        let e = sigma * z;
        let slot = t % params.m;
        let damped = phi * trend;
        let mean = level + damped + seasonal[slot];
        values.push(mean + e);
        one_step_means.push(mean);
        level += damped + params.alpha * e;
        trend = damped + beta * e;
        seasonal[slot] += params.gamma * e;
    }
    Ok(EtsPath {
        values,
        one_step_means,
    })
}

/// Simulates `t_len` observations; the same seed always yields the same series.
pub fn simulate_ets(params: &EtsParams, t_len: usize, seed: u64) -> Result<TimeSeries> {
    let path = simulate_ets_path(params, t_len, seed)?;
    TimeSeries::new(path.values, params.m)
}

/// Variance of the `h`-step-ahead forecast error.
pub fn ets_forecast_variance(params: &EtsParams, h: usize) -> Result<f64> {
    params.validate()?;
    if h == 0 {
        return Err(Error::InvalidParams("h must be at least 1".into()));
    }
    let (a, g) = (params.alpha, params.gamma);
    let hf = h as f64;
    let k = ((h - 1) / params.m) as f64;
    let mut v = 1.0 + a * a * (hf - 1.0) + g * k * (2.0 * a + g);
    if params.kind == EtsKind::AAdA {
        let (b, f) = (params.beta, params.phi);
        let m = params.m as i32;
        let fh = f.powi(h as i32);
        let fm = f.powi(m);
        let one_f = 1.0 - f;
        v += b * f * hf / (one_f * one_f) * (2.0 * a * one_f + b * f);
        v -= b * f * (1.0 - fh) / (one_f * one_f * (1.0 - f * f))
            * (2.0 * a * (1.0 - f * f) + b * f * (1.0 + 2.0 * f - fh));
        v += 2.0 * b * g * f / (one_f * (1.0 - fm))
            * (k * (1.0 - fm) - fm * (1.0 - f.powf(params.m as f64 * k)));
    }
    Ok(params.sigma2 * v)
}

/// Two-sided standard normal quantile `c` for a central probability
/// `confidence` (1.96 at 0.95).
pub fn normal_quantile(confidence: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&confidence) {
        return Err(Error::InvalidParams(format!(
            "confidence must lie in [0, 1), got {confidence}"
        )));
    }
    if confidence == 0.0 {
        return Ok(0.0);
    }
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    Ok(normal.inverse_cdf(0.5 + confidence / 2.0))
}

/// Width `2 * c * sigma_h` of the normal prediction interval.
pub fn theoretical_width(params: &EtsParams, h: usize, confidence: f64) -> Result<f64> {
    let c = normal_quantile(confidence)?;
    Ok(2.0 * c * ets_forecast_variance(params, h)?.sqrt())
}
