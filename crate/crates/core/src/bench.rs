// SPDX-License-Identifier: MIT OR Apache-2.0

//! Runtime-versus-number-of-changes grid on simulated signals.

use crate::algorithms::{
    binseg_solve, fpop_solve, op_solve, pdpa_solve, pelt_solve, snip_solve, sns_solve, Method,
    TraceLevel,
};
use crate::error::Result;
use crate::model::{default_penalty, GaussianCost, TimeSeries};
use crate::sim::{simulate, Placement, SimSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub n_list: Vec<usize>,
    pub changes_list: Vec<usize>,
    pub methods: Vec<Method>,
    pub reps: usize,
    pub seed: u64,
    /// Penalty override; `2σ² log n` when absent.
    pub beta: Option<f64>,
    pub jump_size: f64,
    pub sigma: f64,
    pub placement: Placement,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            n_list: vec![200_000],
            changes_list: vec![10, 100, 1000, 5000],
            methods: vec![Method::Fpop, Method::Pelt, Method::Binseg],
            reps: 1,
            seed: 1,
            beta: None,
            jump_size: 5.0,
            sigma: 1.0,
            placement: Placement::Equal,
        }
    }
}

/// One timed solve. `seconds` and `k_detected` are `None` when the cell failed.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub n_changes: usize,
    pub method: Method,
    pub rep: usize,
    pub seconds: Option<f64>,
    pub k_detected: Option<usize>,
    pub error: Option<String>,
}

/// Times `method` on `series`, excluding everything but the solve itself.
/// Returns `(seconds, detected k)`.
pub fn time_solve(
    series: &TimeSeries,
    model: &GaussianCost,
    method: Method,
    beta: f64,
    kmax: usize,
) -> Result<(f64, usize)> {
    let kmax = kmax.min(series.len().saturating_sub(1));
    let off = TraceLevel::Off;
    let (trace, k) = match method {
        Method::Op => {
            let (s, t) = op_solve(series, model, beta, off)?;
            (t, s.k())
        }
        Method::Pelt => {
            let (s, t) = pelt_solve(series, model, beta, 0.0, off)?;
            (t, s.k())
        }
        Method::Fpop => {
            let (s, t) = fpop_solve(series, model, beta, off)?;
            (t, s.k())
        }
        Method::Binseg => {
            let (s, t) = binseg_solve(series, model, kmax, beta, off)?;
            (t, s.k())
        }
        Method::Sns | Method::Snip | Method::Pdpa => {
            let (r, t) = match method {
                Method::Sns => sns_solve(series, model, kmax, off)?,
                Method::Snip => snip_solve(series, model, kmax, 0.0, off)?,
                _ => pdpa_solve(series, model, kmax, off)?,
            };
            (t, r.best_penalised(beta).0)
        }
    };
    Ok((trace.wall_time.as_secs_f64(), k))
}

/// Runs the grid, calling `on_row` as each cell finishes. Every method in a
/// `(n, n_changes, rep)` cell sees the same simulated series.
pub fn run_bench(cfg: &BenchConfig, mut on_row: impl FnMut(&BenchRow)) -> Vec<BenchRow> {
    let mut rows = Vec::new();
    let model = GaussianCost::new(cfg.sigma).unwrap_or_default();
    for &n in &cfg.n_list {
        for &n_changes in &cfg.changes_list {
            for rep in 0..cfg.reps {
                let spec = SimSpec {
                    n,
                    n_changes,
                    jump_size: cfg.jump_size,
                    sigma: cfg.sigma,
                    seed: cell_seed(cfg.seed, n, n_changes, rep),
                    placement: cfg.placement,
                };
                let series = simulate(&spec).and_then(|s| TimeSeries::new(s.values));
                for &method in &cfg.methods {
                    let outcome = series.as_ref().map_err(Clone::clone).and_then(|series| {
                        let beta = match cfg.beta {
                            Some(b) => b,
                            None => default_penalty(n, cfg.sigma)?,
                        };
                        time_solve(series, &model, method, beta, n_changes + 2)
                    });
                    let row = match outcome {
                        Ok((seconds, k)) => BenchRow {
                            n,
                            n_changes,
                            method,
                            rep,
                            seconds: Some(seconds),
                            k_detected: Some(k),
                            error: None,
                        },
                        Err(e) => BenchRow {
                            n,
                            n_changes,
                            method,
                            rep,
                            seconds: None,
                            k_detected: None,
                            error: Some(e.to_string()),
                        },
                    };
                    on_row(&row);
                    rows.push(row);
                }
            }
        }
    }
    rows
}

fn cell_seed(seed: u64, n: usize, n_changes: usize, rep: usize) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15)
        ^ (n as u64).rotate_left(17)
        ^ (n_changes as u64).rotate_left(37)
        ^ rep as u64
}
