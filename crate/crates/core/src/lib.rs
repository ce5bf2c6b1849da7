//! Point forecasts for univariate time series by weighted nearest neighbours,
//! wrapped in conformal prediction regions (one interval per forecast step),
//! with an online backtest of the regions' coverage and width.
//!
//! The pieces, bottom-up:
//!
//! - [`series`]: validated series, horizon configuration, split sizing, MAPE.
//! - [`wnn`]: the nearest-neighbour forecaster and the `(p, k)` grid search.
//! - [`conformal`]: example pairs, nonconformity scores, p-values, regions.
//! - [`eval`]: the online backtest and forecaster comparison.
//! - [`etssim`]: ETS simulation and closed-form interval widths, used as a
//!   ground truth for the conformal widths.
//! - [`io`], [`report`], [`cli`]: CSV in, JSON/CSV/text out, and the
//!   `wnncp` command-line workflows.
//!
//! ```
//! use wnn_conformal::{conformal_region, ForecasterSpec, TimeSeries};
//!
//! let values: Vec<f64> = (0..240).map(|t| 50.0 + 10.0 * ((t % 12) as f64 / 2.0).sin()).collect();
//! let series = TimeSeries::new(values, 12).unwrap();
//! let region = conformal_region(&series, &ForecasterSpec::wnn(2, 3), 3, 19, 0.05).unwrap();
//! assert_eq!(region.center.len(), 3);
//! ```

pub mod cli;
pub mod conformal;
pub mod error;
pub mod etssim;
pub mod eval;
pub mod io;
pub mod report;
pub mod series;
pub mod wnn;

pub use conformal::{
    conformal_region, make_pairs, nonconformity_scores, p_value, region_from_scores, PairedDataset,
    PredictionRegion, ScoreMatrix,
};
pub use error::{Error, Result};
pub use etssim::{ets_forecast_variance, simulate_ets, theoretical_width, EtsKind, EtsParams};
pub use eval::{
    backtest_scores, check_cp, check_scores, compare_forecasters, tune_on_training, Backtest,
    CheckReport,
};
pub use series::{mape, split_sizes, validate_series, HorizonConfig, SplitSpec, TimeSeries};
pub use wnn::{fpto_tune, point_forecast, wnn_forecast, ForecasterSpec, TuneGrid, TuneResult, Weighting};
