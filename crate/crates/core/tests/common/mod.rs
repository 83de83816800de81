// SPDX-License-Identifier: MIT OR Apache-2.0

#![allow(dead_code)]

use fpseg::{GaussianCost, TimeSeries};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard normal noise around a piecewise-constant mean with a handful of
/// random jumps.
pub fn noisy_steps(rng: &mut ChaCha8Rng, n: usize) -> TimeSeries {
    let noise = Normal::new(0.0, 1.0).unwrap();
    let mut mean = 0.0;
    let values = (0..n)
        .map(|_| {
            if rng.random_bool(0.05) {
                mean = rng.random_range(-4.0..4.0);
            }
            mean + noise.sample(rng)
        })
        .collect();
    TimeSeries::new(values).unwrap()
}

/// F(t) for t = 0..=n by the plain quadratic recursion.
pub fn op_costs(series: &TimeSeries, model: &GaussianCost, beta: f64) -> Vec<f64> {
    use fpseg::CostModel;
    let n = series.len();
    let mut f = vec![0.0; n + 1];
    f[0] = -beta;
    for t in 1..=n {
        f[t] = (0..t)
            .map(|tau| f[tau] + model.segment_cost(series, tau, t) + beta)
            .fold(f64::INFINITY, f64::min);
    }
    f
}
