// SPDX-License-Identifier: MIT OR Apache-2.0

use fpseg::{fpop_solve, rel_close, CostModel, GaussianCost, TimeSeries, TraceLevel};
use proptest::prelude::*;

fn series_strategy(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-50.0f64..50.0, 2..max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn segment_cost_is_minimised_pointwise_sum(
        values in series_strategy(40),
        sigma in 0.2f64..5.0,
        cut in any::<(prop::sample::Index, prop::sample::Index)>(),
    ) {
        let series = TimeSeries::new(values.clone()).unwrap();
        let model = GaussianCost::new(sigma).unwrap();
        let n = values.len();
        let (i, j) = (cut.0.index(n), cut.1.index(n));
        let (t, s) = (i.min(j), i.max(j) + 1);
        let seg = &values[t..s];
        let mean = seg.iter().sum::<f64>() / seg.len() as f64;
        let direct: f64 = seg.iter().map(|&y| model.pointwise_cost(y, mean)).sum();
        let cost = model.segment_cost(&series, t, s);
        prop_assert!(cost >= 0.0);
        // Cancellation in the cumulative form costs a little accuracy when the
        // residual is tiny next to the raw sums, hence the absolute floor.
        let scale = seg.iter().map(|y| y * y).sum::<f64>() * model.inv_two_var();
        prop_assert!(
            rel_close(cost, direct, 1e-9) || (cost - direct).abs() <= 1e-12 * scale,
            "cost {cost} vs direct {direct}"
        );
        // Nudging μ away from the mean never helps.
        for mu in [mean - 0.1, mean + 0.1] {
            let off: f64 = seg.iter().map(|&y| model.pointwise_cost(y, mu)).sum();
            prop_assert!(off >= direct);
        }
    }

    #[test]
    fn splitting_never_costs_more(
        values in series_strategy(40),
        picks in any::<(prop::sample::Index, prop::sample::Index, prop::sample::Index)>(),
    ) {
        let series = TimeSeries::new(values.clone()).unwrap();
        let model = GaussianCost::unit();
        let n = values.len();
        let mut idx = [picks.0.index(n + 1), picks.1.index(n + 1), picks.2.index(n + 1)];
        idx.sort_unstable();
        let [t, s, u] = idx;
        prop_assume!(t < s && s < u);
        let parts = model.segment_cost(&series, t, s) + model.segment_cost(&series, s, u);
        let whole = model.segment_cost(&series, t, u);
        prop_assert!(parts + model.kappa() <= whole + 1e-9);
    }

    #[test]
    fn scaling_data_scales_costs_and_keeps_segmentation(
        values in series_strategy(60),
        power in -2i32..4,
        beta in 0.5f64..20.0,
    ) {
        // Powers of two keep every scaled quantity exact.
        let c = 2f64.powi(power);
        let model = GaussianCost::unit();
        let base = TimeSeries::new(values.clone()).unwrap();
        let scaled = TimeSeries::new(values.iter().map(|y| y * c).collect()).unwrap();
        let n = values.len();
        for (t, s) in [(0, n), (0, n / 2 + 1), (n / 2, n)] {
            let a = model.segment_cost(&base, t, s) * c * c;
            let b = model.segment_cost(&scaled, t, s);
            prop_assert!(rel_close(a, b, 1e-9) || (a - b).abs() < 1e-9 * c * c);
        }
        let plain = fpop_solve(&base, &model, beta, TraceLevel::Off).unwrap().0;
        let stretched = fpop_solve(&scaled, &model, beta * c * c, TraceLevel::Off).unwrap().0;
        prop_assert_eq!(plain.changepoints, stretched.changepoints);
    }
}

#[test]
fn cumulative_statistics_telescope() {
    let series = TimeSeries::new(vec![0.5, -1.25, 3.0, 3.0, 7.5]).unwrap();
    assert_eq!(series.cum_sum()[0], 0.0);
    assert_eq!(series.cum_sumsq()[0], 0.0);
    for t in 1..=series.len() {
        let y = series.values()[t - 1];
        assert_eq!(series.cum_sum()[t] - series.cum_sum()[t - 1], y);
        assert_eq!(series.cum_sumsq()[t] - series.cum_sumsq()[t - 1], y * y);
    }
}
