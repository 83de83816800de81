// SPDX-License-Identifier: MIT OR Apache-2.0

//! Exact penalised and constrained segmentation solvers, plus greedy
//! binary segmentation as a fast approximate comparator.
//!
//! | problem     | no pruning | inequality pruning | functional pruning |
//! |-------------|------------|--------------------|--------------------|
//! | penalised   | [`op_solve`]   | [`pelt_solve`] | [`fpop_solve`] |
//! | constrained | [`sns_solve`]  | [`snip_solve`] | [`pdpa_solve`] |
//!
//! All solvers break ties toward the smallest candidate changepoint.

mod binseg;
mod constrained;
mod fpop;
mod penalised;

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CostModel, GaussianCost, TimeSeries};

pub use binseg::binseg_solve;
pub use constrained::{pdpa_solve, snip_solve, sns_solve, MAX_BACKPOINTERS, MAX_FULL_TABLE};
pub use fpop::{fpop_solve, Fpop};
pub use penalised::{op_solve, pelt_solve};

/// Changepoints plus the costs they achieve.
///
/// `changepoints[j]` is the 1-based index of the last point of segment `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segmentation {
    pub changepoints: Vec<usize>,
    pub total_cost: f64,
    pub penalised_objective: Option<f64>,
    pub means: Vec<f64>,
}

impl Segmentation {
    /// Recomputes costs and means for `changepoints` from raw statistics.
    pub fn from_changepoints<C: CostModel>(
        series: &TimeSeries,
        model: &C,
        changepoints: Vec<usize>,
        beta: Option<f64>,
    ) -> Self {
        let mut total_cost = 0.0;
        let mut means = Vec::with_capacity(changepoints.len() + 1);
        let mut start = 0;
        for &end in changepoints.iter().chain(std::iter::once(&series.len())) {
            total_cost += model.segment_cost(series, start, end);
            means.push(series.segment_mean(start, end));
            start = end;
        }
        let penalised_objective = beta.map(|b| total_cost + b * changepoints.len() as f64);
        Self {
            changepoints,
            total_cost,
            penalised_objective,
            means,
        }
    }

    pub fn k(&self) -> usize {
        self.changepoints.len()
    }
}

/// Optimal segmentations for every changepoint count `0..=kmax`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstrainedResult {
    /// `costs[k]` is the minimal cost of the whole series with `k` changepoints.
    pub costs: Vec<f64>,
    pub segmentations: Vec<Segmentation>,
    /// Full `C[k][t]` table, kept only when it is small enough.
    pub table: Option<Vec<Vec<f64>>>,
}

impl ConstrainedResult {
    pub fn kmax(&self) -> usize {
        self.costs.len() - 1
    }

    /// `(k, C_k + beta·k)` for the `k` minimizing the penalised criterion.
    pub fn best_penalised(&self, beta: f64) -> (usize, f64) {
        self.costs
            .iter()
            .enumerate()
            .map(|(k, c)| (k, c + beta * k as f64))
            .fold(
                (0, f64::INFINITY),
                |best, cur| if cur.1 < best.1 { cur } else { best },
            )
    }
}

/// How much bookkeeping a solver does while it runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TraceLevel {
    /// Nothing beyond wall time.
    #[default]
    Off,
    /// Candidate counts and prune events.
    Counts,
    /// Counts plus the full candidate set at every step.
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateCount {
    pub t: usize,
    /// Changepoint count for constrained solvers.
    pub k: Option<usize>,
    pub count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PruneEvent {
    pub t: usize,
    pub k: Option<usize>,
    pub tau: usize,
}

/// Per-step diagnostics.
///
/// `counts` holds the number of candidate last changepoints considered when
/// computing the optimum at time `t` (for constrained solvers, for each `k`).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunTrace {
    pub level: TraceLevel,
    pub counts: Vec<CandidateCount>,
    /// Sorted candidate sets, parallel to `counts`; filled at [`TraceLevel::Full`].
    pub candidates: Vec<Vec<usize>>,
    pub pruned_at: Vec<PruneEvent>,
    pub wall_time: Duration,
}

impl RunTrace {
    pub fn new(level: TraceLevel) -> Self {
        Self {
            level,
            ..Self::default()
        }
    }

    #[inline]
    pub(crate) fn record<I: Iterator<Item = usize>>(
        &mut self,
        t: usize,
        k: Option<usize>,
        count: usize,
        taus: I,
    ) {
        match self.level {
            TraceLevel::Off => {}
            TraceLevel::Counts => self.counts.push(CandidateCount { t, k, count }),
            TraceLevel::Full => {
                self.counts.push(CandidateCount { t, k, count });
                let mut set: Vec<usize> = taus.collect();
                set.sort_unstable();
                self.candidates.push(set);
            }
        }
    }

    #[inline]
    pub(crate) fn pruned(&mut self, t: usize, k: Option<usize>, taus: &[usize]) {
        if self.level != TraceLevel::Off {
            self.pruned_at
                .extend(taus.iter().map(|&tau| PruneEvent { t, k, tau }));
        }
    }

    /// `(t, count)` pairs for one changepoint count (`None` for penalised runs).
    pub fn counts_for(&self, k: Option<usize>) -> Vec<(usize, usize)> {
        self.counts
            .iter()
            .filter(|c| c.k == k)
            .map(|c| (c.t, c.count))
            .collect()
    }

    /// Candidate set at `(k, t)`, when recorded.
    pub fn candidates_at(&self, k: Option<usize>, t: usize) -> Option<&[usize]> {
        self.counts
            .iter()
            .position(|c| c.k == k && c.t == t)
            .and_then(|i| self.candidates.get(i))
            .map(Vec::as_slice)
    }
}

/// The solvers exposed through the command line and reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Op,
    Pelt,
    Fpop,
    Sns,
    Snip,
    Pdpa,
    Binseg,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::Op,
        Method::Pelt,
        Method::Fpop,
        Method::Sns,
        Method::Snip,
        Method::Pdpa,
        Method::Binseg,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Op => "op",
            Method::Pelt => "pelt",
            Method::Fpop => "fpop",
            Method::Sns => "sns",
            Method::Snip => "snip",
            Method::Pdpa => "pdpa",
            Method::Binseg => "binseg",
        }
    }

    pub fn is_constrained(self) -> bool {
        matches!(self, Method::Sns | Method::Snip | Method::Pdpa)
    }

    pub fn needs_beta(self) -> bool {
        matches!(
            self,
            Method::Op | Method::Pelt | Method::Fpop | Method::Binseg
        )
    }

    pub fn needs_kmax(self) -> bool {
        self.is_constrained()
    }

    /// Whether candidate counts carry pruning information.
    pub fn prunes(self) -> bool {
        matches!(
            self,
            Method::Pelt | Method::Fpop | Method::Snip | Method::Pdpa
        )
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidInput(format!("unknown method '{s}'")))
    }
}

/// Outcome of checking `min_k (C_k + βk)` against the penalised optimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Consistency {
    Consistent {
        k: usize,
        objective: f64,
    },
    Mismatch {
        constrained: f64,
        penalised: f64,
    },
    /// The penalised optimum uses more changepoints than `kmax` allows.
    Inconclusive {
        penalised_k: usize,
        kmax: usize,
    },
}

impl Consistency {
    pub fn holds(&self) -> bool {
        matches!(self, Consistency::Consistent { .. })
    }
}

/// Compares the constrained path (via segment neighbourhood) with FPOP's
/// penalised objective, to `1e-9` relative.
pub fn penalised_constrained_consistency(
    series: &TimeSeries,
    model: &GaussianCost,
    beta: f64,
    kmax: usize,
) -> Result<Consistency> {
    let (seg, _) = fpop_solve(series, model, beta, TraceLevel::Off)?;
    if seg.k() > kmax {
        return Ok(Consistency::Inconclusive {
            penalised_k: seg.k(),
            kmax,
        });
    }
    let (path, _) = sns_solve(series, model, kmax, TraceLevel::Off)?;
    let (k, constrained) = path.best_penalised(beta);
    let penalised = seg.penalised_objective.unwrap_or(f64::NAN);
    Ok(if crate::rel_close(constrained, penalised, 1e-9) {
        Consistency::Consistent {
            k,
            objective: constrained,
        }
    } else {
        Consistency::Mismatch {
            constrained,
            penalised,
        }
    })
}

/// Walks `last[t]` pointers back from `n`; `last[t]` is the optimal last
/// changepoint for `y_{1..=t}` (0 meaning none).
pub(crate) fn backtrack(last: &[usize], n: usize) -> Vec<usize> {
    let mut cps = Vec::new();
    let mut t = n;
    while t > 0 {
        let tau = last[t];
        if tau > 0 {
            cps.push(tau);
        }
        t = tau;
    }
    cps.reverse();
    cps
}

pub(crate) fn check_beta(beta: f64) -> Result<()> {
    if beta.is_finite() && beta >= 0.0 {
        Ok(())
    } else {
        Err(Error::Contract(format!(
            "beta must be finite and >= 0, got {beta}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
        }
        assert!("nope".parse::<Method>().is_err());
        assert_eq!("FPOP".parse::<Method>().unwrap(), Method::Fpop);
    }

    #[test]
    fn backtrack_follows_pointers() {
        // n = 6: last[6] = 3, last[3] = 0.
        let last = [0, 0, 0, 0, 3, 3, 3];
        assert_eq!(backtrack(&last, 6), vec![3]);
        assert_eq!(backtrack(&[0, 0], 1), Vec::<usize>::new());
    }

    #[test]
    fn segmentation_recomputes_costs() {
        let s = TimeSeries::new(vec![1.0, 1.0, 1.0, 10.0, 10.0, 10.0]).unwrap();
        let m = GaussianCost::unit();
        let seg = Segmentation::from_changepoints(&s, &m, vec![3], Some(1.0));
        assert_eq!(seg.total_cost, 0.0);
        assert_eq!(seg.penalised_objective, Some(1.0));
        assert_eq!(seg.means, vec![1.0, 10.0]);
        let none = Segmentation::from_changepoints(&s, &m, vec![], None);
        assert!((none.total_cost - 60.75).abs() < 1e-12);
        assert_eq!(none.penalised_objective, None);
    }
}
