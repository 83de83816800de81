// SPDX-License-Identifier: MIT OR Apache-2.0

//! Segment neighbourhood search and its two pruned variants.
//!
//! All three fill `C[k][t]`, the best cost of `y_{1..=t}` with exactly `k`
//! changepoints, one `k` at a time from the previous column, and record the
//! optimal last changepoint of every `(k, t)` for backtracking.

use web_time::Instant;

use super::{ConstrainedResult, RunTrace, Segmentation, TraceLevel};
use crate::error::{Error, Result};
use crate::model::{CostModel, GaussianCost, TimeSeries};
use crate::piecewise::{domain_for, PiecewiseState};

/// Largest `(kmax + 1)·(n + 1)` for which the whole cost table is returned.
pub const MAX_FULL_TABLE: usize = 10_000_000;

/// Largest `kmax·(n + 1)` backpointer table a constrained run will allocate.
pub const MAX_BACKPOINTERS: usize = 100_000_000;

/// Rolling cost columns plus backpointers shared by the constrained solvers.
struct Columns {
    n: usize,
    kmax: usize,
    prev: Vec<f64>,
    cur: Vec<f64>,
    finals: Vec<f64>,
    back: Vec<u32>,
    table: Option<Vec<Vec<f64>>>,
}

impl Columns {
    fn new<C: CostModel>(series: &TimeSeries, model: &C, kmax: usize) -> Result<Self> {
        let n = series.len();
        if kmax >= n {
            return Err(Error::Contract(format!("kmax = {kmax} must be < n = {n}")));
        }
        let cells = kmax.saturating_mul(n + 1);
        if cells > MAX_BACKPOINTERS || n > u32::MAX as usize {
            return Err(Error::TooLarge(format!(
                "kmax = {kmax} with n = {n} needs {cells} backpointers (limit {MAX_BACKPOINTERS})"
            )));
        }
        let mut prev = vec![f64::INFINITY; n + 1];
        for (t, slot) in prev.iter_mut().enumerate().skip(1) {
            *slot = model.segment_cost(series, 0, t);
        }
        let table = ((kmax + 1) * (n + 1) <= MAX_FULL_TABLE).then(|| vec![prev.clone()]);
        Ok(Self {
            n,
            kmax,
            cur: vec![f64::INFINITY; n + 1],
            finals: vec![prev[n]],
            prev,
            back: vec![0; cells],
            table,
        })
    }

    #[inline]
    fn set(&mut self, k: usize, t: usize, cost: f64, tau: usize) {
        self.cur[t] = cost;
        self.back[(k - 1) * (self.n + 1) + t] = tau as u32;
    }

    /// Closes column `k`: it becomes the previous column for `k + 1`.
    fn rotate(&mut self) {
        self.finals.push(self.cur[self.n]);
        if let Some(table) = self.table.as_mut() {
            table.push(self.cur.clone());
        }
        std::mem::swap(&mut self.prev, &mut self.cur);
        self.cur.fill(f64::INFINITY);
    }

    fn finish<C: CostModel>(self, series: &TimeSeries, model: &C) -> ConstrainedResult {
        let stride = self.n + 1;
        let segmentations = (0..=self.kmax)
            .map(|k| {
                let mut cps = Vec::with_capacity(k);
                let mut t = self.n;
                for l in (1..=k).rev() {
                    t = self.back[(l - 1) * stride + t] as usize;
                    cps.push(t);
                }
                cps.reverse();
                Segmentation::from_changepoints(series, model, cps, None)
            })
            .collect();
        ConstrainedResult {
            costs: self.finals,
            segmentations,
            table: self.table,
        }
    }
}

/// Unpruned segment neighbourhood search, O(K n²).
pub fn sns_solve<C: CostModel>(
    series: &TimeSeries,
    model: &C,
    kmax: usize,
    trace_level: TraceLevel,
) -> Result<(ConstrainedResult, RunTrace)> {
    let start = Instant::now();
    let mut cols = Columns::new(series, model, kmax)?;
    let mut trace = RunTrace::new(trace_level);
    let n = series.len();
    for k in 1..=kmax {
        for t in k + 1..=n {
            trace.record(t, Some(k), t - k, k..t);
            let mut best = f64::INFINITY;
            let mut arg = k;
            for tau in k..t {
                let v = cols.prev[tau] + model.segment_cost(series, tau, t);
                if v < best {
                    best = v;
                    arg = tau;
                }
            }
            cols.set(k, t, best, arg);
        }
        cols.rotate();
    }
    trace.wall_time = start.elapsed();
    Ok((cols.finish(series, model), trace))
}

/// Segment neighbourhood with inequality pruning.
///
/// A candidate `v < t` survives step `t` only while
/// `C[k-1][v] + C(y_{v+1..t}) + κ < C[k-1][t]`; `t` itself always enters.
pub fn snip_solve<C: CostModel>(
    series: &TimeSeries,
    model: &C,
    kmax: usize,
    kappa: f64,
    trace_level: TraceLevel,
) -> Result<(ConstrainedResult, RunTrace)> {
    if !kappa.is_finite() {
        return Err(Error::Contract("kappa must be finite".into()));
    }
    let start = Instant::now();
    let mut cols = Columns::new(series, model, kmax)?;
    let mut trace = RunTrace::new(trace_level);
    let n = series.len();
    let mut candidates: Vec<usize> = Vec::new();
    let mut values: Vec<f64> = Vec::new();
    let mut pruned: Vec<usize> = Vec::new();
    for k in 1..=kmax {
        candidates.clear();
        candidates.push(k);
        for t in k + 1..=n {
            trace.record(t, Some(k), candidates.len(), candidates.iter().copied());
            values.clear();
            values.extend(
                candidates
                    .iter()
                    .map(|&v| cols.prev[v] + model.segment_cost(series, v, t)),
            );
            let mut best = f64::INFINITY;
            let mut arg = k;
            for (&v, &val) in candidates.iter().zip(&values) {
                if val < best {
                    best = val;
                    arg = v;
                }
            }
            cols.set(k, t, best, arg);

            let bound = cols.prev[t] - kappa;
            pruned.clear();
            let mut i = 0;
            candidates.retain(|&v| {
                let keep = values[i] < bound;
                i += 1;
                if !keep {
                    pruned.push(v);
                }
                keep
            });
            trace.pruned(t, Some(k), &pruned);
            candidates.push(t);
        }
        cols.rotate();
    }
    trace.wall_time = start.elapsed();
    Ok((cols.finish(series, model), trace))
}

/// Segment neighbourhood with functional pruning: one piecewise-quadratic
/// state per `k`, with new candidates entering at level `C[k-1][t]`.
pub fn pdpa_solve(
    series: &TimeSeries,
    model: &GaussianCost,
    kmax: usize,
    trace_level: TraceLevel,
) -> Result<(ConstrainedResult, RunTrace)> {
    let start = Instant::now();
    let mut cols = Columns::new(series, model, kmax)?;
    let mut trace = RunTrace::new(trace_level);
    let n = series.len();
    let domain = domain_for(series, model);
    let values = series.values();
    let mut pruned: Vec<usize> = Vec::new();
    for k in 1..=kmax {
        let mut state = PiecewiseState::with_candidate(domain, model, k, cols.prev[k])?;
        for t in k + 1..=n {
            trace.record(t, Some(k), state.len(), state.live_taus());
            state.absorb(values[t - 1]);
            let best = state
                .minimum()
                .ok_or_else(|| Error::Internal(format!("no live candidate at k={k}, t={t}")))?;
            cols.set(k, t, best.value, best.tau);
            pruned.clear();
            state.prune_and_insert(cols.prev[t], t, &mut pruned);
            trace.pruned(t, Some(k), &pruned);
        }
        cols.rotate();
    }
    trace.wall_time = start.elapsed();
    Ok((cols.finish(series, model), trace))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn step_series() -> TimeSeries {
        TimeSeries::new(vec![1.0, 1.0, 1.0, 10.0, 10.0, 10.0]).unwrap()
    }

    type Solver = fn(&TimeSeries, usize) -> Result<(ConstrainedResult, RunTrace)>;

    fn solvers() -> [(&'static str, Solver); 3] {
        [
            ("sns", |s, k| {
                sns_solve(s, &GaussianCost::unit(), k, TraceLevel::Counts)
            }),
            ("snip", |s, k| {
                snip_solve(s, &GaussianCost::unit(), k, 0.0, TraceLevel::Counts)
            }),
            ("pdpa", |s, k| {
                pdpa_solve(s, &GaussianCost::unit(), k, TraceLevel::Counts)
            }),
        ]
    }

    #[test]
    fn step_example_all_solvers() {
        for (name, solve) in solvers() {
            let (res, _) = solve(&step_series(), 2).unwrap();
            assert!((res.costs[0] - 60.75).abs() < 1e-12, "{name}");
            assert!(res.costs[1].abs() < 1e-12, "{name}");
            assert!(res.costs[2].abs() < 1e-12, "{name}");
            assert_eq!(res.segmentations[1].changepoints, vec![3], "{name}");
            assert_eq!(res.segmentations[2].k(), 2, "{name}");
            assert!(res.table.is_some());
        }
    }

    #[test]
    fn kmax_zero_and_too_large() {
        for (name, solve) in solvers() {
            let (res, _) = solve(&step_series(), 0).unwrap();
            assert_eq!(res.costs.len(), 1, "{name}");
            assert!((res.costs[0] - 60.75).abs() < 1e-12);
            assert!(
                matches!(solve(&step_series(), 6), Err(Error::Contract(_))),
                "{name}"
            );
        }
    }

    #[test]
    fn two_point_series() {
        // C_{1,2} = C(y_1) + C(y_2) = 0; C_{0,2} = (0 - 10)² / 4 = 25.
        let s = TimeSeries::new(vec![0.0, 10.0]).unwrap();
        for (name, solve) in solvers() {
            let (res, _) = solve(&s, 1).unwrap();
            assert!((res.costs[0] - 25.0).abs() < 1e-12, "{name}");
            assert_eq!(res.costs[1], 0.0, "{name}");
            assert_eq!(res.segmentations[1].changepoints, vec![1], "{name}");
        }
    }

    #[test]
    fn too_large_is_refused() {
        let s = TimeSeries::new(vec![0.0; 100_001]).unwrap();
        assert!(matches!(
            sns_solve(&s, &GaussianCost::unit(), 1_000, TraceLevel::Off),
            Err(Error::TooLarge(_))
        ));
    }
}
