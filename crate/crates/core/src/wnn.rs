//! Weighted nearest-neighbour (WNN) forecasting over lagged windows, and the
//! grid search that tunes the window multiplier `p` and neighbour count `k`.
//!
//! To forecast the next `n` values of a history of length `L`, the query is
//! the last `n * p` observations. Every length-`n * p` window of the history
//! whose following `n` values are also observed is a candidate (sliding step
//! 1, so there are `L - n*p - n + 1` of them). The `k` candidates closest to
//! the query in Euclidean distance are kept, earlier windows winning ties,
//! and the forecast is the weighted average of their `n`-value continuations.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{mape, HorizonConfig};

/// Regulariser added to squared distances before inversion.
pub const WEIGHT_EPS: f64 = 1e-8;

/// How the selected neighbours' continuations are averaged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Weighting {
    /// Every neighbour counts equally.
    Uniform,
    /// Weight `1 / (d^2 + 1e-8)`, normalised, where `d` is the Euclidean
    /// distance between the neighbour's window and the query.
    #[default]
    InverseDistance,
}

impl fmt::Display for Weighting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Weighting::Uniform => "uniform",
            Weighting::InverseDistance => "inverse-distance",
        })
    }
}

impl FromStr for Weighting {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "uniform" => Ok(Weighting::Uniform),
            "inverse-distance" | "inverse" => Ok(Weighting::InverseDistance),
            other => Err(format!(
                "unknown weighting `{other}` (expected `uniform` or `inverse-distance`)"
            )),
        }
    }
}

/// A candidate window: squared distance to the query and start offset.
#[derive(Debug, Clone, Copy)]
struct Neighbor {
    dist2: f64,
    start: usize,
}

fn candidate_count(len: usize, window: usize, n: usize) -> Option<usize> {
    (len >= window + n).then(|| len - window - n + 1)
}

/// All candidates sorted by distance, ties broken by start offset.
fn ranked_neighbors(history: &[f64], window: usize, n: usize) -> Vec<Neighbor> {
    let len = history.len();
    let query = &history[len - window..];
    let count = len - window - n + 1;
    let mut out: Vec<Neighbor> = (0..count)
        .map(|start| {
            let dist2 = history[start..start + window]
                .iter()
                .zip(query)
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            Neighbor { dist2, start }
        })
        .collect();
    // stable: equal distances keep chronological order
    out.sort_by(|a, b| a.dist2.total_cmp(&b.dist2));
    out
}

fn combine(
    history: &[f64],
    neighbors: &[Neighbor],
    window: usize,
    n: usize,
    weighting: Weighting,
) -> Vec<f64> {
    let weights: Vec<f64> = match weighting {
        Weighting::Uniform => vec![1.0; neighbors.len()],
        Weighting::InverseDistance => neighbors
            .iter()
            .map(|nb| 1.0 / (nb.dist2 + WEIGHT_EPS))
            .collect(),
    };
    let total: f64 = weights.iter().sum();
    // Averaged as offsets from the nearest continuation, so identical
    // continuations reproduce their value exactly.
    let base = &history[neighbors[0].start + window..neighbors[0].start + window + n];
    let mut offsets = vec![0.0; n];
    for (nb, w) in neighbors.iter().zip(&weights).skip(1) {
        let cont = &history[nb.start + window..nb.start + window + n];
        for ((o, c), b) in offsets.iter_mut().zip(cont).zip(base) {
            *o += w * (c - b);
        }
    }
    base.iter().zip(offsets).map(|(b, o)| b + o / total).collect()
}

/// Forecasts the `config.n` values following `history`.
pub fn wnn_forecast(history: &[f64], config: &HorizonConfig, weighting: Weighting) -> Result<Vec<f64>> {
    let window = config.window_len();
    let n = config.n;
    let candidates = candidate_count(history.len(), window, n).ok_or(Error::HistoryTooShort {
        len: history.len(),
        required: window + n,
    })?;
    if config.k > candidates {
        return Err(Error::TooFewCandidates {
            k: config.k,
            candidates,
        });
    }
    let ranked = ranked_neighbors(history, window, n);
    Ok(combine(history, &ranked[..config.k], window, n, weighting))
}

/// The `(p, k)` search space; both axes are kept sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TuneGrid {
    p: Vec<usize>,
    k: Vec<usize>,
}

impl TuneGrid {
    pub fn new(mut p: Vec<usize>, mut k: Vec<usize>) -> Result<Self> {
        for axis in [&mut p, &mut k] {
            axis.sort_unstable();
            axis.dedup();
        }
        if p.is_empty() || k.is_empty() || p[0] == 0 || k[0] == 0 {
            return Err(Error::InvalidParams(
                "tuning grids must be non-empty and contain only positive values".into(),
            ));
        }
        Ok(Self { p, k })
    }

    pub fn single(p: usize, k: usize) -> Result<Self> {
        Self::new(vec![p], vec![k])
    }

    pub fn p_values(&self) -> &[usize] {
        &self.p
    }

    pub fn k_values(&self) -> &[usize] {
        &self.k
    }
}

impl Default for TuneGrid {
    /// `p` and `k` each range over `1..=12`.
    fn default() -> Self {
        Self {
            p: (1..=12).collect(),
            k: (1..=12).collect(),
        }
    }
}

/// One evaluated grid cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TuneCell {
    pub p: usize,
    pub k: usize,
    pub mape_star: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuneResult {
    pub p_star: usize,
    pub k_star: usize,
    /// The minimised fold-averaged MAPE.
    pub objective: f64,
    /// Evaluated cells in grid order (`p` outer, `k` inner).
    pub trace: Vec<TuneCell>,
    /// Cells that could not be evaluated on every fold.
    pub infeasible: Vec<(usize, usize)>,
}

/// Grid search for the `(p, k)` pair minimising the MAPE averaged over
/// `folds` rolling validation folds.
///
/// Fold `i` (1-based) trains on `a_1 .. a_{T - i*n}` and scores the forecast
/// of the next `n` values. Cells that some fold cannot evaluate (history too
/// short for `p`, or fewer candidates than `k`) are listed in
/// [`TuneResult::infeasible`]; the search fails only if every cell is
/// infeasible. Ties go to the smallest `p`, then the smallest `k`.
pub fn fpto_tune(
    series: &[f64],
    n: usize,
    folds: usize,
    grid: &TuneGrid,
    weighting: Weighting,
) -> Result<TuneResult> {
    if n == 0 || folds == 0 {
        return Err(Error::InvalidParams(
            "horizon n and fold count must be at least 1".into(),
        ));
    }
    let t_len = series.len();
    if t_len <= folds * n {
        return Err(Error::SeriesTooShort(format!(
            "{folds} folds of {n} values need more than {} observations, got {t_len}",
            folds * n
        )));
    }

    // Per p: Some(sum of fold MAPEs) per k, or None when infeasible.
    let per_p: Vec<Result<Vec<Option<f64>>>> = grid
        .p
        .par_iter()
        .map(|&p| tune_window(series, n, folds, p, &grid.k, weighting))
        .collect();

    let mut trace = Vec::new();
    let mut infeasible = Vec::new();
    for (&p, sums) in grid.p.iter().zip(per_p) {
        for (&k, sum) in grid.k.iter().zip(sums?) {
            match sum {
                Some(total) => trace.push(TuneCell {
                    p,
                    k,
                    mape_star: total / folds as f64,
                }),
                None => infeasible.push((p, k)),
            }
        }
    }

    let best = trace
        .iter()
        .fold(None::<&TuneCell>, |best, cell| match best {
            Some(b) if b.mape_star <= cell.mape_star => Some(b),
            _ => Some(cell),
        })
        .copied()
        .ok_or(Error::GridInfeasible)?;

    Ok(TuneResult {
        p_star: best.p,
        k_star: best.k,
        objective: best.mape_star,
        trace,
        infeasible,
    })
}

fn tune_window(
    series: &[f64],
    n: usize,
    folds: usize,
    p: usize,
    ks: &[usize],
    weighting: Weighting,
) -> Result<Vec<Option<f64>>> {
    let window = n * p;
    let t_len = series.len();
    // the shortest training set belongs to the last fold
    let Some(min_candidates) = candidate_count(t_len - folds * n, window, n) else {
        return Ok(vec![None; ks.len()]);
    };
    let mut sums: Vec<Option<f64>> = ks
        .iter()
        .map(|&k| (k <= min_candidates).then_some(0.0))
        .collect();
    for i in 1..=folds {
        let train = &series[..t_len - i * n];
        let actual = &series[t_len - i * n..t_len - i * n + n];
        let ranked = ranked_neighbors(train, window, n);
        for (&k, sum) in ks.iter().zip(sums.iter_mut()) {
            if let Some(total) = sum {
                let forecast = combine(train, &ranked[..k], window, n, weighting);
                *total += mape(actual, &forecast)?;
            }
        }
    }
    Ok(sums)
}

/// A pluggable point forecaster for the conformal layer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ForecasterSpec {
    Wnn {
        p: usize,
        k: usize,
        #[serde(default)]
        weighting: Weighting,
    },
    /// Repeats the last observed seasonal cycle.
    SeasonalNaive { period: usize },
}

impl ForecasterSpec {
    pub fn wnn(p: usize, k: usize) -> Self {
        ForecasterSpec::Wnn {
            p,
            k,
            weighting: Weighting::default(),
        }
    }

    pub fn seasonal_naive(period: usize) -> Self {
        ForecasterSpec::SeasonalNaive { period }
    }

    /// Shortest history this forecaster accepts for horizon `n`.
    pub fn min_history(&self, n: usize) -> usize {
        match *self {
            ForecasterSpec::Wnn { p, k, .. } => n * p + n + k - 1,
            ForecasterSpec::SeasonalNaive { period } => period,
        }
    }

    pub fn name(&self) -> String {
        match *self {
            ForecasterSpec::Wnn { p, k, .. } => format!("WNN(p={p},k={k})"),
            ForecasterSpec::SeasonalNaive { period } => format!("SeasonalNaive(m={period})"),
        }
    }
}

impl fmt::Display for ForecasterSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Forecasts the `n` values following `history` with the given forecaster.
pub fn point_forecast(spec: &ForecasterSpec, history: &[f64], n: usize) -> Result<Vec<f64>> {
    match *spec {
        ForecasterSpec::Wnn { p, k, weighting } => {
            wnn_forecast(history, &HorizonConfig::new(n, p, k)?, weighting)
        }
        ForecasterSpec::SeasonalNaive { period } => {
            if period == 0 {
                return Err(Error::InvalidPeriod(0));
            }
            if n == 0 {
                return Err(Error::InvalidParams("n must be at least 1".into()));
            }
            if history.len() < period {
                return Err(Error::HistoryTooShort {
                    len: history.len(),
                    required: period,
                });
            }
            let last = &history[history.len() - period..];
            Ok((0..n).map(|j| last[j % period]).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: usize, p: usize, k: usize) -> HorizonConfig {
        HorizonConfig::new(n, p, k).unwrap()
    }

    #[test]
    fn constant_series_forecasts_constant() {
        let h = vec![5.0; 30];
        for w in [Weighting::Uniform, Weighting::InverseDistance] {
            let f = wnn_forecast(&h, &cfg(2, 2, 3), w).unwrap();
            assert_eq!(f.len(), 2);
            for v in f {
                assert!((v - 5.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn periodic_series_returns_next_period() {
        let period = [3.0, 7.0, 1.0, 4.0];
        let h: Vec<f64> = period.iter().copied().cycle().take(40).collect();
        let f = wnn_forecast(&h, &cfg(4, 1, 1), Weighting::InverseDistance).unwrap();
        assert_eq!(f, period.to_vec());
    }

    #[test]
    fn single_neighbor_is_weight_free() {
        let h = [1.0, 4.0, 2.0, 8.0, 5.0, 7.0, 3.0, 9.0, 6.0, 2.5];
        let a = wnn_forecast(&h, &cfg(1, 2, 1), Weighting::Uniform).unwrap();
        let b = wnn_forecast(&h, &cfg(1, 2, 1), Weighting::InverseDistance).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn equidistant_tie_goes_to_earlier_window() {
        // query [0]; windows [0] at offsets 0 and 2 both at distance 0
        let h = [0.0, 10.0, 0.0, 20.0, 0.0];
        let f = wnn_forecast(&h, &cfg(1, 1, 1), Weighting::Uniform).unwrap();
        assert_eq!(f, vec![10.0]);
    }

    #[test]
    fn history_and_candidate_errors() {
        let h = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(
            wnn_forecast(&h, &cfg(2, 2, 1), Weighting::Uniform),
            Err(Error::HistoryTooShort {
                len: 4,
                required: 6
            })
        );
        assert_eq!(
            wnn_forecast(&h, &cfg(1, 2, 3), Weighting::Uniform),
            Err(Error::TooFewCandidates {
                k: 3,
                candidates: 2
            })
        );
    }

    #[test]
    fn inverse_distance_exact_match_dominates() {
        // exact match at offset 2 (continuation 9), others far away
        let h = [50.0, 1.0, 3.0, 9.0, 60.0, 3.0];
        let f = wnn_forecast(&h, &cfg(1, 1, 3), Weighting::InverseDistance).unwrap();
        assert!((f[0] - 9.0).abs() < 1e-6, "{f:?}");
        let u = wnn_forecast(&h, &cfg(1, 1, 3), Weighting::Uniform).unwrap();
        assert!((u[0] - 9.0).abs() > 1.0);
    }

    #[test]
    fn tune_single_cell() {
        let s: Vec<f64> = (0..60).map(|i| 10.0 + ((i * 7) % 11) as f64).collect();
        let r = fpto_tune(&s, 1, 3, &TuneGrid::single(2, 3).unwrap(), Weighting::default()).unwrap();
        assert_eq!((r.p_star, r.k_star), (2, 3));
        assert_eq!(r.trace.len(), 1);
        assert_eq!(r.objective, r.trace[0].mape_star);
    }

    #[test]
    fn tune_periodic_series_reaches_zero() {
        let base: Vec<f64> = (0..12).map(|i| 20.0 + i as f64 * 1.5 + (i % 3) as f64).collect();
        let s: Vec<f64> = base.iter().copied().cycle().take(240).collect();
        let grid = TuneGrid::new(vec![1, 2], vec![1, 2, 3]).unwrap();
        let r = fpto_tune(&s, 12, 3, &grid, Weighting::InverseDistance).unwrap();
        assert_eq!(r.trace.len(), 6);
        assert!(r.objective < 1e-6);
        // tie-break: smallest p then smallest k among zero cells
        assert_eq!((r.p_star, r.k_star), (1, 1));
    }

    #[test]
    fn tune_reports_infeasible_cells() {
        let s: Vec<f64> = (0..20).map(|i| 1.0 + i as f64).collect();
        // fold 3 trains on 17 values: p=1 has 16 candidates, p=20 none
        let grid = TuneGrid::new(vec![1, 20], vec![1, 16, 17]).unwrap();
        let r = fpto_tune(&s, 1, 3, &grid, Weighting::Uniform).unwrap();
        assert_eq!(r.trace.len(), 2);
        assert_eq!(r.infeasible, vec![(1, 17), (20, 1), (20, 16), (20, 17)]);

        let grid = TuneGrid::single(20, 1).unwrap();
        assert_eq!(
            fpto_tune(&s, 1, 3, &grid, Weighting::Uniform),
            Err(Error::GridInfeasible)
        );
    }

    #[test]
    fn seasonal_naive_cycles_last_period() {
        let h = [9.0, 9.0, 1.0, 2.0, 3.0, 4.0];
        let spec = ForecasterSpec::seasonal_naive(4);
        assert_eq!(point_forecast(&spec, &h, 2).unwrap(), vec![1.0, 2.0]);
        assert_eq!(
            point_forecast(&spec, &h, 6).unwrap(),
            vec![1.0, 2.0, 3.0, 4.0, 1.0, 2.0]
        );
        assert!(matches!(
            point_forecast(&spec, &h[..3], 1),
            Err(Error::HistoryTooShort { .. })
        ));
    }

    #[test]
    fn dispatch_matches_direct_call() {
        let h: Vec<f64> = (0..50).map(|i| ((i as f64) * 0.7).sin() * 5.0 + 20.0).collect();
        let spec = ForecasterSpec::wnn(3, 4);
        assert_eq!(
            point_forecast(&spec, &h, 2).unwrap(),
            wnn_forecast(&h, &cfg(2, 3, 4), Weighting::InverseDistance).unwrap()
        );
    }

    #[test]
    fn weighting_parses() {
        assert_eq!("uniform".parse::<Weighting>().unwrap(), Weighting::Uniform);
        assert_eq!(
            "inverse-distance".parse::<Weighting>().unwrap(),
            Weighting::InverseDistance
        );
        assert!("cosine".parse::<Weighting>().is_err());
    }
}
