// SPDX-License-Identifier: MIT OR Apache-2.0

//! Segment costs, pointwise costs, sufficient statistics and penalties.
//!
//! Every solver reaches the data only through [`TimeSeries`] and a
//! [`CostModel`]; the Gaussian change-in-mean model is the one shipped here.

use crate::error::{Error, Result};

/// Segment costs in `[-COST_CLAMP, 0)` are rounding noise and read as zero.
pub const COST_CLAMP: f64 = 1e-9;

/// Ordered observations with cumulative sums of `y` and `y²`.
///
/// Index conventions are 1-based in the changepoint sense: `cum_sum[t]` is
/// the sum of the first `t` values, so a segment `y_{t+1..=s}` is queried as
/// `(t, s)` with `0 <= t < s <= n`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
    cum_sum: Vec<f64>,
    cum_sumsq: Vec<f64>,
}

impl TimeSeries {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("series is empty".into()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "value {} at position {} is not finite",
                values[i],
                i + 1
            )));
        }
        let n = values.len();
        let mut cum_sum = Vec::with_capacity(n + 1);
        let mut cum_sumsq = Vec::with_capacity(n + 1);
        cum_sum.push(0.0);
        cum_sumsq.push(0.0);
        let (mut s, mut ss) = (0.0_f64, 0.0_f64);
        for &y in &values {
            s += y;
            ss += y * y;
            cum_sum.push(s);
            cum_sumsq.push(ss);
        }
        Ok(Self {
            values,
            cum_sum,
            cum_sumsq,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false: construction rejects empty input.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn cum_sum(&self) -> &[f64] {
        &self.cum_sum
    }

    pub fn cum_sumsq(&self) -> &[f64] {
        &self.cum_sumsq
    }

    /// Mean of `y_{t+1..=s}`.
    pub fn segment_mean(&self, t: usize, s: usize) -> f64 {
        (self.cum_sum[s] - self.cum_sum[t]) / (s - t) as f64
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &y| {
                (lo.min(y), hi.max(y))
            })
    }

    /// Sample standard deviation (n − 1 denominator); zero for a single point.
    pub fn sample_std(&self) -> f64 {
        let n = self.len();
        if n < 2 {
            return 0.0;
        }
        let mean = self.cum_sum[n] / n as f64;
        let ss: f64 = self.values.iter().map(|y| (y - mean) * (y - mean)).sum();
        (ss / (n - 1) as f64).sqrt()
    }
}

/// A segment cost that decomposes (or at least is superadditive up to
/// `kappa`) across a split point.
pub trait CostModel {
    /// Cost of `y_{t+1..=s}`; caller guarantees `t < s <= n`.
    fn segment_cost(&self, series: &TimeSeries, t: usize, s: usize) -> f64;

    /// Loss of a single observation `y` under segment parameter `mu`.
    fn pointwise_cost(&self, y: f64, mu: f64) -> f64;

    /// The constant making `C(a) + C(b) + kappa <= C(a ∪ b)` hold.
    fn kappa(&self) -> f64;
}

/// Change in mean of Normal data with known standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianCost {
    sigma: f64,
    inv_two_var: f64,
}

impl Default for GaussianCost {
    fn default() -> Self {
        Self::unit()
    }
}

impl GaussianCost {
    pub fn new(sigma: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::InvalidInput(format!(
                "sigma must be positive and finite, got {sigma}"
            )));
        }
        Ok(Self {
            sigma,
            inv_two_var: 1.0 / (2.0 * sigma * sigma),
        })
    }

    pub fn unit() -> Self {
        Self {
            sigma: 1.0,
            inv_two_var: 0.5,
        }
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// `1 / (2σ²)`: the μ² coefficient each absorbed point contributes.
    pub fn inv_two_var(&self) -> f64 {
        self.inv_two_var
    }

    /// Checked form of [`CostModel::segment_cost`].
    pub fn checked_segment_cost(&self, series: &TimeSeries, t: usize, s: usize) -> Result<f64> {
        if t >= s || s > series.len() {
            return Err(Error::Contract(format!(
                "segment ({t}, {s}] outside 0 <= t < s <= {}",
                series.len()
            )));
        }
        Ok(self.segment_cost(series, t, s))
    }

    /// `2σ² log n`, the default linear penalty per changepoint.
    pub fn default_penalty(&self, series: &TimeSeries) -> Result<f64> {
        default_penalty(series.len(), self.sigma)
    }
}

impl CostModel for GaussianCost {
    #[inline]
    fn segment_cost(&self, series: &TimeSeries, t: usize, s: usize) -> f64 {
        let sum = series.cum_sum[s] - series.cum_sum[t];
        let sumsq = series.cum_sumsq[s] - series.cum_sumsq[t];
        let rss = sumsq - sum * sum / (s - t) as f64;
        (rss * self.inv_two_var).max(0.0)
    }

    #[inline]
    fn pointwise_cost(&self, y: f64, mu: f64) -> f64 {
        let d = y - mu;
        d * d * self.inv_two_var
    }

    fn kappa(&self) -> f64 {
        0.0
    }
}

/// `2σ² log n` for a series of length `n >= 2`.
pub fn default_penalty(n: usize, sigma: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::Contract(format!(
            "default penalty needs n >= 2, got {n}"
        )));
    }
    Ok(2.0 * sigma * sigma * (n as f64).ln())
}

/// Penalty settings shared by the penalised and constrained solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Penalty {
    /// Cost of each additional changepoint.
    pub beta: f64,
    /// Inequality-pruning slack; 0 is valid for the Gaussian cost.
    pub kappa: f64,
    /// Maximum number of changepoints for constrained runs.
    pub kmax: usize,
}

impl Penalty {
    pub fn validate(&self, n: usize) -> Result<()> {
        if !(self.beta.is_finite() && self.beta >= 0.0) {
            return Err(Error::Contract(format!(
                "beta must be finite and >= 0, got {}",
                self.beta
            )));
        }
        if !self.kappa.is_finite() {
            return Err(Error::Contract("kappa must be finite".into()));
        }
        if self.kmax >= n {
            return Err(Error::Contract(format!(
                "kmax = {} must be < n = {n}",
                self.kmax
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(v: &[f64]) -> TimeSeries {
        TimeSeries::new(v.to_vec()).unwrap()
    }

    fn direct_cost(v: &[f64], sigma: f64) -> f64 {
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        v.iter().map(|y| (y - mean) * (y - mean)).sum::<f64>() / (2.0 * sigma * sigma)
    }

    #[test]
    fn segment_cost_examples() {
        let m = GaussianCost::unit();
        assert_eq!(m.segment_cost(&series(&[5.0, 5.0, 5.0]), 0, 3), 0.0);
        let s = series(&[1.0, 2.0, 3.0]);
        assert!((m.segment_cost(&s, 0, 3) - 1.0).abs() < 1e-12);
        assert!((direct_cost(&[1.0, 2.0, 3.0], 1.0) - 1.0).abs() < 1e-12);
        let step = [1.0, 1.0, 1.0, 10.0, 10.0, 10.0];
        assert!((direct_cost(&step, 1.0) - 60.75).abs() < 1e-12);
        assert!((m.segment_cost(&series(&step), 0, 6) - 60.75).abs() < 1e-12);
    }

    #[test]
    fn segment_cost_rejects_bad_ranges() {
        let m = GaussianCost::unit();
        let s = series(&[1.0, 2.0]);
        assert!(matches!(
            m.checked_segment_cost(&s, 1, 1),
            Err(Error::Contract(_))
        ));
        assert!(matches!(
            m.checked_segment_cost(&s, 2, 1),
            Err(Error::Contract(_))
        ));
        assert!(matches!(
            m.checked_segment_cost(&s, 0, 3),
            Err(Error::Contract(_))
        ));
        assert!(m.checked_segment_cost(&s, 0, 2).is_ok());
    }

    #[test]
    fn pointwise_examples() {
        let unit = GaussianCost::unit();
        assert_eq!(unit.pointwise_cost(3.0, 3.0), 0.0);
        assert_eq!(unit.pointwise_cost(0.0, 2.0), 2.0);
        assert_eq!(
            GaussianCost::new(2.0).unwrap().pointwise_cost(0.0, 2.0),
            0.5
        );
    }

    #[test]
    fn default_penalty_examples() {
        assert!((default_penalty(100, 1.0).unwrap() - 9.210_340_371_976_184).abs() < 1e-12);
        assert!((default_penalty(2, 1.0).unwrap() - 1.386_294_361_119_890_6).abs() < 1e-12);
        assert!(default_penalty(1, 1.0).is_err());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(TimeSeries::new(vec![]).is_err());
        assert!(TimeSeries::new(vec![1.0, f64::NAN]).is_err());
        assert!(TimeSeries::new(vec![f64::INFINITY]).is_err());
        assert!(GaussianCost::new(0.0).is_err());
        assert!(GaussianCost::new(-1.0).is_err());
    }

    #[test]
    fn cumulative_invariants() {
        let s = series(&[0.5, -1.5, 2.0]);
        assert_eq!(s.cum_sum()[0], 0.0);
        assert_eq!(s.cum_sumsq()[0], 0.0);
        for t in 1..=s.len() {
            assert!((s.cum_sum()[t] - s.cum_sum()[t - 1] - s.values()[t - 1]).abs() < 1e-15);
        }
    }

    #[test]
    fn penalty_validation() {
        let p = Penalty {
            beta: 1.0,
            kappa: 0.0,
            kmax: 3,
        };
        assert!(p.validate(4).is_ok());
        assert!(p.validate(3).is_err());
        assert!(Penalty { beta: -1.0, ..p }.validate(10).is_err());
    }
}
