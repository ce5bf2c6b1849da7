//! Property tests against the oracles in `common`.

mod common;

use proptest::prelude::*;

use common::*;
use wnn_conformal::etssim::simulate_ets_path;
use wnn_conformal::series::min_calibration;
use wnn_conformal::*;

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

fn positive_series(min_len: usize, max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(1.0f64..100.0, min_len..max_len)
}

fn any_weighting() -> impl Strategy<Value = Weighting> {
    prop_oneof![Just(Weighting::Uniform), Just(Weighting::InverseDistance)]
}

proptest! {
    #[test]
    fn mape_of_identical_series_is_zero(x in positive_series(1, 50)) {
        prop_assert_eq!(mape(&x, &x).unwrap(), 0.0);
    }

    #[test]
    fn mape_is_scale_invariant(
        pairs in prop::collection::vec((1.0f64..100.0, 1.0f64..100.0), 1..50),
        c in prop_oneof![0.01f64..1000.0, -1000.0f64..-0.01],
    ) {
        let (x, y): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        let cx: Vec<f64> = x.iter().map(|v| c * v).collect();
        let cy: Vec<f64> = y.iter().map(|v| c * v).collect();
        prop_assert!(close(mape(&x, &y).unwrap(), mape(&cx, &cy).unwrap(), 1e-12));
    }

    #[test]
    fn split_meets_calibration_minimum(t_len in 10usize..2000, n in 1usize..6, delta in 0.01f64..0.5) {
        if let Ok(split) = split_sizes(t_len, n, delta) {
            prop_assert!(split.i1 >= min_calibration(delta));
            prop_assert!((delta * (split.i1 as f64 + 1.0) + 1e-9).floor() >= 1.0);
            prop_assert!(t_len >= n * (split.i1 + split.i2) + n);
            prop_assert!(split.i2 >= 1);
        }
    }

    #[test]
    fn wnn_stays_within_neighbour_labels(
        h in prop::collection::vec(-50.0f64..50.0, 20..80),
        n in 1usize..4,
        p in 1usize..4,
        k in 1usize..8,
        weighting in any_weighting(),
    ) {
        let w = n * p;
        prop_assume!(h.len() >= w + n + k - 1);
        let cfg = HorizonConfig::new(n, p, k).unwrap();
        let f = wnn_forecast(&h, &cfg, weighting).unwrap();
        for j in 0..n {
            let labels: Vec<f64> = (0..=h.len() - w - n).map(|s| h[s + w + j]).collect();
            let lo = labels.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = labels.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(f[j] >= lo - 1e-9 && f[j] <= hi + 1e-9);
        }
    }

    #[test]
    fn wnn_matches_brute_force(
        h in prop::collection::vec(-50.0f64..50.0, 20..80),
        n in 1usize..4,
        p in 1usize..4,
        k in 1usize..8,
        weighting in any_weighting(),
    ) {
        prop_assume!(h.len() >= n * p + n + k - 1);
        let cfg = HorizonConfig::new(n, p, k).unwrap();
        let got = wnn_forecast(&h, &cfg, weighting).unwrap();
        let want = brute_wnn(&h, n, p, k, weighting);
        for (g, w) in got.iter().zip(&want) {
            prop_assert!(close(*g, *w, 1e-9), "{:?} vs {:?}", got, want);
        }
    }

    #[test]
    fn scores_match_brute_force(
        a in positive_series(40, 90),
        n in 1usize..4,
        p in 1usize..3,
        k in 1usize..4,
        back in 1usize..10,
    ) {
        let t = a.len() - n * back;
        prop_assume!(t >= n * p + n + k - 1);
        let spec = ForecasterSpec::wnn(p, k);
        let got = nonconformity_scores(&a, t, &spec, n).unwrap();
        let forecast = brute_wnn(&a[..t], n, p, k, Weighting::InverseDistance);
        for j in 0..n {
            prop_assert!(close(got[j], (a[t + j] - forecast[j]).abs(), 1e-9));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tuning_trace_matches_double_loop(
        a in positive_series(40, 80),
        n in 1usize..3,
        folds in 1usize..5,
        weighting in any_weighting(),
    ) {
        let grid = TuneGrid::new((1..=4).collect(), (1..=5).collect()).unwrap();
        let t_len = a.len();
        let result = fpto_tune(&a, n, folds, &grid, weighting).unwrap();
        let mut best = f64::INFINITY;
        for p in 1..=4 {
            for k in 1..=5 {
                let shortest = t_len - folds * n;
                let feasible = shortest >= n * p + n + k - 1;
                let cell = result.trace.iter().find(|c| c.p == p && c.k == k);
                if !feasible {
                    prop_assert!(cell.is_none());
                    prop_assert!(result.infeasible.contains(&(p, k)));
                    continue;
                }
                let mut total = 0.0;
                for i in 1..=folds {
                    let train = &a[..t_len - i * n];
                    let actual = &a[t_len - i * n..t_len - i * n + n];
                    total += naive_mape(actual, &brute_wnn(train, n, p, k, weighting));
                }
                let expected = total / folds as f64;
                best = best.min(expected);
                let cell = cell.expect("feasible cell missing from trace");
                prop_assert!(close(cell.mape_star, expected, 1e-9));
            }
        }
        prop_assert!(close(result.objective, best, 1e-9));
    }

    #[test]
    fn check_report_is_self_consistent(
        rows in prop::collection::vec(prop::collection::vec(0.0f64..10.0, 3), 30..70),
        i1 in 20usize..28,
        delta in 0.05f64..0.3,
    ) {
        let cal = ScoreMatrix::from_rows(3, rows[..i1].to_vec()).unwrap();
        let test = ScoreMatrix::from_rows(3, rows[i1..].to_vec()).unwrap();
        let r = check_scores(&cal, &test, delta, None).unwrap();
        let i2 = rows.len() - i1;
        prop_assert_eq!(r.m.len(), i2);
        let mut covered = 0;
        for i in 0..i2 {
            for j in 0..3 {
                let inside = rows[i1 + i][j] <= r.m[i][j];
                prop_assert_eq!(r.find[i][j], u8::from(inside));
                covered += usize::from(inside);
            }
        }
        prop_assert!(close(r.overall_coverage, 100.0 * covered as f64 / (3 * i2) as f64, 1e-12));
        for j in 0..3 {
            let col: Vec<f64> = r.m.iter().map(|row| row[j]).collect();
            let mean = col.iter().sum::<f64>() / i2 as f64;
            prop_assert!(close(r.mean_width[j], 2.0 * mean, 1e-12));
            let hits = r.find.iter().filter(|row| row[j] == 1).count();
            prop_assert!(close(r.component_coverage[j], 100.0 * hits as f64 / i2 as f64, 1e-12));
        }
    }

    #[test]
    fn larger_delta_never_widens(
        rows in prop::collection::vec(prop::collection::vec(0.0f64..10.0, 2), 40..80),
        d1 in 0.05f64..0.4,
        d2 in 0.05f64..0.4,
    ) {
        let (small, large) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
        let i1 = 30;
        let cal = ScoreMatrix::from_rows(2, rows[..i1].to_vec()).unwrap();
        let test = ScoreMatrix::from_rows(2, rows[i1..].to_vec()).unwrap();
        let tight = check_scores(&cal, &test, large, None).unwrap();
        let loose = check_scores(&cal, &test, small, None).unwrap();
        for (a, b) in tight.m.iter().flatten().zip(loose.m.iter().flatten()) {
            prop_assert!(a <= b);
        }
        prop_assert!(tight.overall_coverage <= loose.overall_coverage);

        let center = vec![0.0, 0.0];
        let inner = region_from_scores(center.clone(), &cal, large).unwrap();
        let outer = region_from_scores(center, &cal, small).unwrap();
        for j in 0..2 {
            prop_assert!(outer.lower()[j] <= inner.lower()[j] && inner.upper()[j] <= outer.upper()[j]);
        }
    }
}

fn parameter_sets() -> Vec<EtsParams> {
    vec![
        EtsParams::ana(0.5, 0.2, 12),
        EtsParams::ana(0.8, 0.4, 12),
        EtsParams::aada(0.7, 0.3, 0.2, 0.82, 12),
        EtsParams::aada(0.8, 0.2, 0.1, 0.9, 12),
    ]
}

#[test]
fn forecast_variance_is_non_decreasing() {
    for params in parameter_sets() {
        let vars: Vec<f64> = (1..=2 * params.m)
            .map(|h| ets_forecast_variance(&params, h).unwrap())
            .collect();
        assert!(vars.windows(2).all(|w| w[1] >= w[0]), "{params:?}: {vars:?}");
    }
}

#[test]
fn one_step_errors_have_the_innovation_variance() {
    for (i, params) in parameter_sets().into_iter().enumerate() {
        let sigma2 = [1.0, 0.25, 4.0, 2.0][i];
        let params = params.with_sigma2(sigma2);
        let path = simulate_ets_path(&params, 100_000, 17 + i as u64).unwrap();
        let errors: Vec<f64> = path.values.iter().zip(&path.one_step_means).map(|(v, m)| v - m).collect();
        let mean = errors.iter().sum::<f64>() / errors.len() as f64;
        let var = errors.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (errors.len() - 1) as f64;
        assert!((var / sigma2 - 1.0).abs() <= 0.05, "variance {var} vs {sigma2}");
    }
}
