// SPDX-License-Identifier: MIT OR Apache-2.0

//! Browser bindings for the demo page in `www/`.
//!
//! Every export takes plain numbers and arrays and returns a JSON string, so
//! the page needs no generated glue beyond what `wasm-bindgen` emits.

use fpseg::piecewise::PiecewiseMin;
use fpseg::report::{run, SolveRequest};
use fpseg::sim::{simulate as simulate_series, Placement, SimSpec};
use fpseg::{
    default_penalty, fpop_solve, pelt_solve, Fpop, GaussianCost, Method, TimeSeries, TraceLevel,
};
use serde::Serialize;
use wasm_bindgen::prelude::*;

type Outcome = Result<String, String>;

fn to_json(value: &impl Serialize) -> Outcome {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

fn series(values: Vec<f64>) -> Result<TimeSeries, String> {
    TimeSeries::new(values).map_err(|e| e.to_string())
}

/// A non-positive or non-finite `beta` means "use the default".
fn beta_or_default(beta: f64, n: usize) -> Result<f64, String> {
    if beta.is_finite() && beta > 0.0 {
        Ok(beta)
    } else if n < 2 {
        Ok(0.0)
    } else {
        default_penalty(n, 1.0).map_err(|e| e.to_string())
    }
}

#[derive(Serialize)]
struct Simulated {
    values: Vec<f64>,
    changepoints: Vec<usize>,
}

pub fn simulate_json(n: usize, changes: usize, jump: f64, seed: u64, random: bool) -> Outcome {
    let spec = SimSpec {
        jump_size: jump,
        placement: if random {
            Placement::UniformRandom
        } else {
            Placement::Equal
        },
        ..SimSpec::new(n, changes, seed)
    };
    let sim = simulate_series(&spec).map_err(|e| e.to_string())?;
    to_json(&Simulated {
        values: sim.values,
        changepoints: sim.changepoints,
    })
}

pub fn segment_json(values: Vec<f64>, method: &str, beta: f64, kmax: usize) -> Outcome {
    let method: Method = method.parse().map_err(|e: fpseg::Error| e.to_string())?;
    let series = series(values)?;
    let mut req = SolveRequest::new(method);
    if method.needs_kmax() {
        req.kmax = Some(kmax.min(series.len().saturating_sub(1)));
    }
    // Constrained methods report the k that is best under this penalty.
    req.beta = Some(beta_or_default(beta, series.len())?);
    let (report, _) = run(&series, &req).map_err(|e| e.to_string())?;
    to_json(&report)
}

#[derive(Serialize)]
struct Counts {
    beta: f64,
    pelt: Vec<usize>,
    fpop: Vec<usize>,
}

pub fn candidate_counts_json(values: Vec<f64>, beta: f64) -> Outcome {
    let series = series(values)?;
    let beta = beta_or_default(beta, series.len())?;
    let model = GaussianCost::unit();
    let counts = |trace: fpseg::RunTrace| trace.counts.iter().map(|c| c.count).collect();
    let (_, pelt) =
        pelt_solve(&series, &model, beta, 0.0, TraceLevel::Counts).map_err(|e| e.to_string())?;
    let (_, fpop) =
        fpop_solve(&series, &model, beta, TraceLevel::Counts).map_err(|e| e.to_string())?;
    to_json(&Counts {
        beta,
        pelt: counts(pelt),
        fpop: counts(fpop),
    })
}

#[derive(Serialize)]
struct Piece {
    tau: usize,
    a: f64,
    b: f64,
    c: f64,
    intervals: Vec<(f64, f64)>,
}

#[derive(Serialize)]
struct Snapshot {
    t: usize,
    beta: f64,
    domain: (f64, f64),
    /// `F(t)` and where the minimum sits.
    cost: f64,
    argmin_tau: usize,
    argmin_mu: f64,
    /// `F(t) + β`: the pruning level and the newest candidate's constant value.
    level: f64,
    pieces: Vec<Piece>,
}

/// The piecewise cost after `t` observations, including the candidate added at `t`.
pub fn cost_snapshot_json(values: Vec<f64>, beta: f64, t: usize) -> Outcome {
    let series = series(values)?;
    let beta = beta_or_default(beta, series.len())?;
    let model = GaussianCost::unit();
    let t = t.clamp(1, series.len());
    let mut run = Fpop::new(&series, &model, beta, TraceLevel::Off).map_err(|e| e.to_string())?;
    while run.time() < t {
        run.advance().map_err(|e| e.to_string())?;
    }
    let state = run.state();
    let PiecewiseMin { value, tau, mu } = state.global_min().map_err(|e| e.to_string())?;
    to_json(&Snapshot {
        t,
        beta,
        domain: state.domain(),
        cost: run.cost_at(t),
        argmin_tau: tau,
        argmin_mu: mu,
        level: value + beta,
        pieces: state
            .pieces()
            .into_iter()
            .map(|p| Piece {
                tau: p.tau,
                a: p.a,
                b: p.b,
                c: p.c,
                intervals: p.valid.intervals().to_vec(),
            })
            .collect(),
    })
}

fn js(outcome: Outcome) -> Result<String, JsError> {
    outcome.map_err(|e| JsError::new(&e))
}

/// Simulated series with alternating means; `{values, changepoints}`.
#[wasm_bindgen]
pub fn simulate(
    n: usize,
    changes: usize,
    jump: f64,
    seed: u32,
    random: bool,
) -> Result<String, JsError> {
    js(simulate_json(n, changes, jump, u64::from(seed), random))
}

/// Runs one solver; returns the same report as the command line.
#[wasm_bindgen]
pub fn segment(values: Vec<f64>, method: &str, beta: f64, kmax: usize) -> Result<String, JsError> {
    js(segment_json(values, method, beta, kmax))
}

/// Candidate-set sizes per step for PELT and FPOP on the same data.
#[wasm_bindgen]
pub fn candidate_counts(values: Vec<f64>, beta: f64) -> Result<String, JsError> {
    js(candidate_counts_json(values, beta))
}

/// FPOP's piecewise-quadratic cost over μ after `t` points.
#[wasm_bindgen]
pub fn cost_snapshot(values: Vec<f64>, beta: f64, t: usize) -> Result<String, JsError> {
    js(cost_snapshot_json(values, beta, t))
}
