// SPDX-License-Identifier: MIT OR Apache-2.0

//! Brute-force segmentation by enumerating every changepoint subset.
//!
//! Deliberately naive: segment costs are summed point by point around a
//! directly computed mean, with no cumulative statistics and no pruning.

use crate::error::{Error, Result};
use crate::model::{CostModel, GaussianCost, TimeSeries};

/// Default length limit: 2^19 subsets.
pub const DEFAULT_N_LIMIT: usize = 20;

/// `(cost, changepoints)` of one optimal segmentation.
pub type Optimum = (f64, Vec<usize>);

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    /// Best penalised criterion `Σ C + β·k`, when a penalty was given.
    pub best_penalised: Option<Optimum>,
    /// Best total cost with exactly `k` changepoints, for `k = 0..=kmax`.
    pub best_per_k: Vec<Optimum>,
}

fn direct_cost(model: &GaussianCost, values: &[f64]) -> f64 {
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    values.iter().map(|&y| model.pointwise_cost(y, mean)).sum()
}

/// Calls `visit(changepoints, cost)` for every subset of `1..n` with at most
/// `kmax` elements.
fn enumerate(
    series: &TimeSeries,
    model: &GaussianCost,
    kmax: usize,
    mut visit: impl FnMut(&[usize], f64),
) {
    let n = series.len();
    let y = series.values();
    let mut cps = Vec::with_capacity(n);
    for mask in 0u64..(1u64 << (n - 1)) {
        if mask.count_ones() as usize > kmax {
            continue;
        }
        cps.clear();
        cps.extend((1..n).filter(|&i| mask & (1 << (i - 1)) != 0));
        let mut cost = 0.0;
        let mut start = 0;
        for &end in cps.iter().chain(std::iter::once(&n)) {
            cost += direct_cost(model, &y[start..end]);
            start = end;
        }
        visit(&cps, cost);
    }
}

/// Strictly better, or equal and lexicographically smaller.
fn improves(candidate: (f64, &[usize]), best: &Optimum) -> bool {
    candidate.0 < best.0 || (candidate.0 == best.0 && candidate.1 < best.1.as_slice())
}

fn check_limit(n: usize, n_limit: usize) -> Result<()> {
    if n > n_limit || n > 63 {
        return Err(Error::OracleLimit {
            n,
            limit: n_limit.min(63),
        });
    }
    Ok(())
}

/// Exact penalised optimum over all `2^(n-1)` segmentations.
pub fn oracle_penalised(
    series: &TimeSeries,
    model: &GaussianCost,
    beta: f64,
    n_limit: usize,
) -> Result<OracleResult> {
    let n = series.len();
    check_limit(n, n_limit)?;
    let mut best: Optimum = (f64::INFINITY, Vec::new());
    let mut per_k: Vec<Optimum> = vec![(f64::INFINITY, Vec::new()); n];
    enumerate(series, model, n - 1, |cps, cost| {
        let pen = cost + beta * cps.len() as f64;
        if improves((pen, cps), &best) {
            best = (pen, cps.to_vec());
        }
        let slot = &mut per_k[cps.len()];
        if improves((cost, cps), slot) {
            *slot = (cost, cps.to_vec());
        }
    });
    Ok(OracleResult {
        best_penalised: Some(best),
        best_per_k: per_k,
    })
}

/// Exact `C_{k,n}` and an optimal placement for each `k <= kmax`.
pub fn oracle_constrained(
    series: &TimeSeries,
    model: &GaussianCost,
    kmax: usize,
    n_limit: usize,
) -> Result<OracleResult> {
    let n = series.len();
    check_limit(n, n_limit)?;
    if kmax >= n {
        return Err(Error::Contract(format!("kmax = {kmax} must be < n = {n}")));
    }
    let mut per_k: Vec<Optimum> = vec![(f64::INFINITY, Vec::new()); kmax + 1];
    enumerate(series, model, kmax, |cps, cost| {
        let slot = &mut per_k[cps.len()];
        if improves((cost, cps), slot) {
            *slot = (cost, cps.to_vec());
        }
    });
    Ok(OracleResult {
        best_penalised: None,
        best_per_k: per_k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[f64]) -> TimeSeries {
        TimeSeries::new(v.to_vec()).unwrap()
    }

    #[test]
    fn penalised_examples() {
        let m = GaussianCost::unit();
        let r = oracle_penalised(&s(&[1.0, 1.0, 1.0, 10.0, 10.0, 10.0]), &m, 1.0, 20).unwrap();
        assert_eq!(r.best_penalised, Some((1.0, vec![3])));

        let r = oracle_penalised(&s(&[4.0]), &m, 1.0, 20).unwrap();
        assert_eq!(r.best_penalised, Some((0.0, vec![])));

        let r = oracle_penalised(&s(&[0.0, 10.0]), &m, 0.1, 20).unwrap();
        assert_eq!(r.best_penalised, Some((0.1, vec![1])));
        assert_eq!(r.best_per_k[0].0, 25.0);
    }

    #[test]
    fn constrained_examples() {
        let m = GaussianCost::unit();
        let r = oracle_constrained(&s(&[0.0, 10.0]), &m, 1, 20).unwrap();
        assert_eq!(r.best_per_k, vec![(25.0, vec![]), (0.0, vec![1])]);

        let r = oracle_constrained(&s(&[2.0; 7]), &m, 4, 20).unwrap();
        for (k, (cost, cps)) in r.best_per_k.iter().enumerate() {
            assert_eq!(*cost, 0.0);
            assert_eq!(cps.len(), k);
        }

        let r = oracle_constrained(&s(&[1.0, 1.0, 1.0, 10.0, 10.0, 10.0]), &m, 1, 20).unwrap();
        assert_eq!(r.best_per_k[1], (0.0, vec![3]));
    }

    #[test]
    fn ties_break_lexicographically() {
        let m = GaussianCost::unit();
        let r = oracle_constrained(&s(&[2.0; 5]), &m, 2, 20).unwrap();
        assert_eq!(r.best_per_k[1].1, vec![1]);
        assert_eq!(r.best_per_k[2].1, vec![1, 2]);
    }

    #[test]
    fn refuses_long_input() {
        let m = GaussianCost::unit();
        let long = s(&[0.0; 21]);
        assert!(matches!(
            oracle_penalised(&long, &m, 1.0, DEFAULT_N_LIMIT),
            Err(Error::OracleLimit { n: 21, limit: 20 })
        ));
        assert!(oracle_constrained(&s(&[0.0; 3]), &m, 3, 20).is_err());
    }
}
