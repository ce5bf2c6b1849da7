//! Independent reference implementations used as test oracles. None of these
//! call into the code paths they check.

#![allow(dead_code)]

use wnn_conformal::Weighting;

/// Brute-force weighted nearest neighbours: scan every window, order by
/// (distance, position), average the continuations of the first `k`.
pub fn brute_wnn(history: &[f64], n: usize, p: usize, k: usize, weighting: Weighting) -> Vec<f64> {
    let w = n * p;
    let len = history.len();
    let query: Vec<f64> = history[len - w..].to_vec();
    let mut scored = Vec::new();
    let mut start = 0;
    while start + w + n <= len {
        let mut d2 = 0.0;
        for i in 0..w {
            let diff = history[start + i] - query[i];
            d2 += diff * diff;
        }
        scored.push((d2, start));
        start += 1;
    }
    scored.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
    let chosen = &scored[..k];
    let weights: Vec<f64> = chosen
        .iter()
        .map(|(d2, _)| match weighting {
            Weighting::Uniform => 1.0,
            Weighting::InverseDistance => 1.0 / (d2 + 1e-8),
        })
        .collect();
    let total: f64 = weights.iter().sum();
    (0..n)
        .map(|j| {
            chosen
                .iter()
                .zip(&weights)
                .map(|((_, s), wt)| wt * history[s + w + j])
                .sum::<f64>()
                / total
        })
        .collect()
}

/// Offset of the window nearest to the query (earliest on ties).
pub fn nearest_window(history: &[f64], n: usize, p: usize) -> usize {
    let w = n * p;
    let len = history.len();
    let mut best = (f64::INFINITY, 0);
    for start in 0..=(len - w - n) {
        let d2: f64 = (0..w)
            .map(|i| (history[start + i] - history[len - w + i]).powi(2))
            .sum();
        if d2 < best.0 {
            best = (d2, start);
        }
    }
    best.1
}

/// `s`-th largest (1-based) by counting, without sorting: the value `v`
/// with fewer than `s` values strictly above it and at least `s` values at
/// or above it.
pub fn select_kth_largest(values: &[f64], s: usize) -> f64 {
    for &v in values {
        let above = values.iter().filter(|&&x| x > v).count();
        let at_or_above = values.iter().filter(|&&x| x >= v).count();
        if above < s && s <= at_or_above {
            return v;
        }
    }
    panic!("rank {s} out of range for {} values", values.len());
}

pub fn naive_mape(actual: &[f64], predicted: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..actual.len() {
        acc += (1.0 - predicted[i] / actual[i]).abs();
    }
    acc * 100.0 / actual.len() as f64
}

/// p-value by sorting descending and locating the candidate's position.
pub fn sorted_p_value(scores: &[f64], alpha: f64) -> f64 {
    let mut all = scores.to_vec();
    all.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let at_least = all.iter().take_while(|&&x| x >= alpha).count();
    (at_least + 1) as f64 / (scores.len() + 1) as f64
}

/// Extent of `{y : p(|y - center|) > delta}` on a uniform grid, as
/// `(lowest included, highest included)`.
pub fn grid_region(scores: &[f64], center: f64, delta: f64, step: f64, half_span: f64) -> Option<(f64, f64)> {
    let steps = (half_span / step).ceil() as i64;
    let mut lo = None;
    let mut hi = None;
    for i in -steps..=steps {
        let y = center + i as f64 * step;
        let alpha = (y - center).abs();
        let count = scores.iter().filter(|&&a| a >= alpha).count() + 1;
        let p = count as f64 / (scores.len() + 1) as f64;
        if p > delta {
            lo.get_or_insert(y);
            hi = Some(y);
        }
    }
    lo.zip(hi)
}

/// Online check re-derived row by row: for step `i` the half-width is the
/// `floor(delta * (i1 + i + 1))`-th largest of the first `i1 + i` scores.
pub fn naive_online_m(column: &[f64], i1: usize, delta: f64) -> Vec<f64> {
    let mut out = Vec::new();
    for i in 0..column.len() - i1 {
        let h = i1 + i;
        let s = (delta * (h as f64 + 1.0) + 1e-9).floor() as usize;
        out.push(select_kth_largest(&column[..h], s));
    }
    out
}
