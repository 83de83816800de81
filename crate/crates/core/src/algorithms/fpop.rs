// SPDX-License-Identifier: MIT OR Apache-2.0

//! Optimal partitioning with functional pruning.

use web_time::Instant;

use super::{backtrack, check_beta, RunTrace, Segmentation, TraceLevel};
use crate::error::{Error, Result};
use crate::model::{GaussianCost, TimeSeries};
use crate::piecewise::{domain_for, PiecewiseState};

/// Step-by-step functional-pruning run over one series.
///
/// Each [`Fpop::advance`] absorbs one observation, reads `F(t)` off the
/// minimum of the piecewise cost, then keeps for every candidate only the
/// μ-region where it stays at or below `F(t) + β`.
#[derive(Debug)]
pub struct Fpop<'a> {
    series: &'a TimeSeries,
    model: GaussianCost,
    beta: f64,
    state: PiecewiseState,
    costs: Vec<f64>,
    last: Vec<usize>,
    t: usize,
    trace: RunTrace,
    pruned: Vec<usize>,
    started: Instant,
}

impl<'a> Fpop<'a> {
    pub fn new(
        series: &'a TimeSeries,
        model: &GaussianCost,
        beta: f64,
        trace_level: TraceLevel,
    ) -> Result<Self> {
        check_beta(beta)?;
        let n = series.len();
        let state = PiecewiseState::with_candidate(domain_for(series, model), model, 0, 0.0)?;
        let mut costs = vec![0.0; n + 1];
        costs[0] = -beta;
        Ok(Self {
            series,
            model: *model,
            beta,
            state,
            costs,
            last: vec![0; n + 1],
            t: 0,
            trace: RunTrace::new(trace_level),
            pruned: Vec::new(),
            started: Instant::now(),
        })
    }

    /// Number of observations processed so far.
    pub fn time(&self) -> usize {
        self.t
    }

    pub fn state(&self) -> &PiecewiseState {
        &self.state
    }

    /// `F(t)` for `t <= self.time()`.
    pub fn cost_at(&self, t: usize) -> f64 {
        self.costs[t]
    }

    /// Processes the next observation; returns `false` once the series is exhausted.
    pub fn advance(&mut self) -> Result<bool> {
        let n = self.series.len();
        if self.t == n {
            return Ok(false);
        }
        self.t += 1;
        let t = self.t;
        self.trace
            .record(t, None, self.state.len(), self.state.live_taus());
        let values = self.series.values();
        self.state.absorb(values[t - 1]);
        let best = self
            .state
            .minimum()
            .ok_or_else(|| Error::Internal(format!("no live candidate at t={t}")))?;
        self.costs[t] = best.value;
        self.last[t] = best.tau;

        self.pruned.clear();
        self.state
            .prune_and_insert(best.value + self.beta, t, &mut self.pruned);
        self.trace.pruned(t, None, &self.pruned);
        Ok(true)
    }

    pub fn finish(mut self) -> Result<(Segmentation, RunTrace)> {
        while self.advance()? {}
        self.trace.wall_time = self.started.elapsed();
        let cps = backtrack(&self.last, self.series.len());
        Ok((
            Segmentation::from_changepoints(self.series, &self.model, cps, Some(self.beta)),
            self.trace,
        ))
    }
}

/// Exact penalised segmentation with functional pruning.
pub fn fpop_solve(
    series: &TimeSeries,
    model: &GaussianCost,
    beta: f64,
    trace_level: TraceLevel,
) -> Result<(Segmentation, RunTrace)> {
    Fpop::new(series, model, beta, trace_level)?.finish()
}
