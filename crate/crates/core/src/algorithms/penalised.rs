// SPDX-License-Identifier: MIT OR Apache-2.0

//! Optimal partitioning and its inequality-pruned variant (PELT).

use web_time::Instant;

use super::{backtrack, check_beta, RunTrace, Segmentation, TraceLevel};
use crate::error::Result;
use crate::model::{CostModel, TimeSeries};

/// Exact penalised segmentation by the unpruned O(n²) recursion
/// `F(t) = min_{τ<t} F(τ) + C(y_{τ+1..t}) + β`, with `F(0) = -β`.
pub fn op_solve<C: CostModel>(
    series: &TimeSeries,
    model: &C,
    beta: f64,
    trace_level: TraceLevel,
) -> Result<(Segmentation, RunTrace)> {
    check_beta(beta)?;
    let n = series.len();
    let mut trace = RunTrace::new(trace_level);
    let start = Instant::now();

    let mut f = vec![0.0; n + 1];
    let mut last = vec![0usize; n + 1];
    f[0] = -beta;
    for t in 1..=n {
        trace.record(t, None, t, 0..t);
        let mut best = f64::INFINITY;
        let mut arg = 0;
        for (tau, &f_tau) in f[..t].iter().enumerate() {
            let v = f_tau + model.segment_cost(series, tau, t);
            if v < best {
                best = v;
                arg = tau;
            }
        }
        f[t] = best + beta;
        last[t] = arg;
    }

    trace.wall_time = start.elapsed();
    let cps = backtrack(&last, n);
    Ok((
        Segmentation::from_changepoints(series, model, cps, Some(beta)),
        trace,
    ))
}

/// Optimal partitioning restricted to candidates that survive the test
/// `F(τ) + C(y_{τ+1..t}) + κ <= F(t)`.
pub fn pelt_solve<C: CostModel>(
    series: &TimeSeries,
    model: &C,
    beta: f64,
    kappa: f64,
    trace_level: TraceLevel,
) -> Result<(Segmentation, RunTrace)> {
    check_beta(beta)?;
    let n = series.len();
    let mut trace = RunTrace::new(trace_level);
    let start = Instant::now();

    let mut f = vec![0.0; n + 1];
    let mut last = vec![0usize; n + 1];
    f[0] = -beta;
    // Kept in increasing order so the first minimum is the smallest tau.
    let mut candidates: Vec<usize> = vec![0];
    let mut values: Vec<f64> = Vec::new();
    let mut pruned: Vec<usize> = Vec::new();

    for t in 1..=n {
        trace.record(t, None, candidates.len(), candidates.iter().copied());
        values.clear();
        values.extend(
            candidates
                .iter()
                .map(|&tau| f[tau] + model.segment_cost(series, tau, t)),
        );
        let mut best = f64::INFINITY;
        let mut arg = 0;
        for (&tau, &v) in candidates.iter().zip(&values) {
            if v < best {
                best = v;
                arg = tau;
            }
        }
        f[t] = best + beta;
        last[t] = arg;

        let bound = f[t] - kappa;
        if trace_level == TraceLevel::Off {
            let mut i = 0;
            candidates.retain(|_| {
                let keep = values[i] <= bound;
                i += 1;
                keep
            });
        } else {
            pruned.clear();
            let mut i = 0;
            candidates.retain(|&tau| {
                let keep = values[i] <= bound;
                i += 1;
                if !keep {
                    pruned.push(tau);
                }
                keep
            });
            trace.pruned(t, None, &pruned);
        }
        candidates.push(t);
    }

    trace.wall_time = start.elapsed();
    let cps = backtrack(&last, n);
    Ok((
        Segmentation::from_changepoints(series, model, cps, Some(beta)),
        trace,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::GaussianCost;

    fn step_series() -> TimeSeries {
        TimeSeries::new(vec![1.0, 1.0, 1.0, 10.0, 10.0, 10.0]).unwrap()
    }

    #[test]
    fn op_examples() {
        let m = GaussianCost::unit();
        let (seg, trace) = op_solve(&step_series(), &m, 1.0, TraceLevel::Counts).unwrap();
        assert_eq!(seg.changepoints, vec![3]);
        assert!((seg.penalised_objective.unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(
            trace
                .counts_for(None)
                .iter()
                .map(|c| c.1)
                .collect::<Vec<_>>(),
            vec![1, 2, 3, 4, 5, 6]
        );

        let (seg, _) = op_solve(&step_series(), &m, 100.0, TraceLevel::Off).unwrap();
        assert!(seg.changepoints.is_empty());
        assert!((seg.penalised_objective.unwrap() - 60.75).abs() < 1e-12);

        let flat = TimeSeries::new(vec![2.5; 20]).unwrap();
        let (seg, _) = op_solve(&flat, &m, 0.3, TraceLevel::Off).unwrap();
        assert!(seg.changepoints.is_empty());
        assert_eq!(seg.penalised_objective, Some(0.0));
    }

    #[test]
    fn pelt_examples() {
        let m = GaussianCost::unit();
        let (seg, _) = pelt_solve(&step_series(), &m, 1.0, 0.0, TraceLevel::Off).unwrap();
        assert_eq!(seg.changepoints, vec![3]);

        let single = TimeSeries::new(vec![4.0]).unwrap();
        let (seg, trace) = pelt_solve(&single, &m, 1.0, 0.0, TraceLevel::Full).unwrap();
        assert!(seg.changepoints.is_empty());
        assert_eq!(trace.candidates_at(None, 1), Some(&[0usize][..]));
    }

    #[test]
    fn pelt_prunes_after_clear_change() {
        let m = GaussianCost::unit();
        let (_, trace) = pelt_solve(&step_series(), &m, 1.0, 0.0, TraceLevel::Full).unwrap();
        // At t = 6 the candidates before the change are gone.
        let at6 = trace.candidates_at(None, 6).unwrap();
        assert!(at6.iter().all(|&tau| tau >= 3), "{at6:?}");
        assert!(!trace.pruned_at.is_empty());
    }

    #[test]
    fn negative_beta_rejected() {
        let m = GaussianCost::unit();
        assert!(op_solve(&step_series(), &m, -1.0, TraceLevel::Off).is_err());
        assert!(pelt_solve(&step_series(), &m, f64::NAN, 0.0, TraceLevel::Off).is_err());
    }
}
