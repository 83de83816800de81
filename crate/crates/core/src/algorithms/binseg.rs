// SPDX-License-Identifier: MIT OR Apache-2.0

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use web_time::Instant;

use super::{check_beta, RunTrace, Segmentation, TraceLevel};
use crate::error::Result;
use crate::model::{CostModel, TimeSeries};

/// Best split of one segment `y_{start+1..=end}`.
#[derive(Debug, Clone, Copy)]
struct Split {
    gain: f64,
    start: usize,
    end: usize,
    at: usize,
}

impl PartialEq for Split {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Split {}

impl PartialOrd for Split {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Split {
    // Max-heap on gain; equal gains favour the leftmost segment.
    fn cmp(&self, other: &Self) -> Ordering {
        self.gain
            .total_cmp(&other.gain)
            .then_with(|| other.start.cmp(&self.start))
    }
}

fn best_split<C: CostModel>(
    series: &TimeSeries,
    model: &C,
    start: usize,
    end: usize,
) -> Option<Split> {
    if end - start < 2 {
        return None;
    }
    let whole = model.segment_cost(series, start, end);
    let mut best: Option<Split> = None;
    for at in start + 1..end {
        let gain =
            whole - model.segment_cost(series, start, at) - model.segment_cost(series, at, end);
        if best.is_none_or(|b| gain > b.gain) {
            best = Some(Split {
                gain,
                start,
                end,
                at,
            });
        }
    }
    best
}

/// Greedy binary segmentation: repeatedly applies the single split with the
/// largest cost reduction until `kmax` splits are placed or the best
/// reduction falls below `beta`. Not guaranteed optimal.
pub fn binseg_solve<C: CostModel>(
    series: &TimeSeries,
    model: &C,
    kmax: usize,
    beta: f64,
    trace_level: TraceLevel,
) -> Result<(Segmentation, RunTrace)> {
    check_beta(beta)?;
    let mut trace = RunTrace::new(trace_level);
    let started = Instant::now();
    let n = series.len();

    let mut heap = BinaryHeap::new();
    heap.extend(best_split(series, model, 0, n));
    let mut cps = Vec::new();
    while cps.len() < kmax {
        let Some(split) = heap.pop() else { break };
        if split.gain < beta {
            break;
        }
        cps.push(split.at);
        heap.extend(best_split(series, model, split.start, split.at));
        heap.extend(best_split(series, model, split.at, split.end));
    }
    cps.sort_unstable();

    trace.wall_time = started.elapsed();
    Ok((
        Segmentation::from_changepoints(series, model, cps, Some(beta)),
        trace,
    ))
}
