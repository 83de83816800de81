// SPDX-License-Identifier: MIT OR Apache-2.0

//! Input parsing, solver dispatch and the serialized run report.

use serde::{Deserialize, Serialize};

use crate::algorithms::{
    binseg_solve, fpop_solve, op_solve, pdpa_solve, pelt_solve, snip_solve, sns_solve,
    CandidateCount, Method, RunTrace, Segmentation, TraceLevel,
};
use crate::error::{Error, Result};
use crate::model::{default_penalty, GaussianCost, TimeSeries};

/// Parses one number per line. Blank lines are skipped and a first line
/// reading `value` is treated as a CSV header.
pub fn parse_values(text: &str) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim().trim_end_matches(',').trim();
        if line.is_empty() {
            continue;
        }
        if values.is_empty() && i == 0 && line.trim_matches('"').eq_ignore_ascii_case("value") {
            continue;
        }
        let v: f64 = line.parse().map_err(|_| {
            Error::InvalidInput(format!(
                "line {}: cannot parse '{}' as a number",
                i + 1,
                raw
            ))
        })?;
        if !v.is_finite() {
            return Err(Error::InvalidInput(format!(
                "line {}: value is not finite",
                i + 1
            )));
        }
        values.push(v);
    }
    if values.is_empty() {
        return Err(Error::InvalidInput("input contains no values".into()));
    }
    Ok(values)
}

/// What to run on a series.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveRequest {
    pub method: Method,
    /// Penalty per changepoint; defaults to `2σ² log n` where needed.
    pub beta: Option<f64>,
    pub kmax: Option<usize>,
    pub sigma: f64,
    pub kappa: f64,
    pub trace: TraceLevel,
}

impl SolveRequest {
    pub fn new(method: Method) -> Self {
        Self {
            method,
            beta: None,
            kmax: None,
            sigma: 1.0,
            kappa: 0.0,
            trace: TraceLevel::Off,
        }
    }
}

/// Identifies the input and parameters a report was produced from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub n: usize,
    /// FNV-1a over the little-endian bits of every value, as hex.
    pub checksum: String,
    pub sigma: f64,
    pub kappa: f64,
}

/// One entry of a constrained solver's path: the best segmentation with `k` changes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathEntry {
    pub k: usize,
    pub cost: f64,
    pub changepoints: Vec<usize>,
}

/// Serialized result of one solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub method: Method,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kmax: Option<usize>,
    pub changepoints: Vec<usize>,
    pub k: usize,
    pub total_cost: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub penalised_objective: Option<f64>,
    pub means: Vec<f64>,
    pub wall_time_ms: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<CandidateCount>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<Vec<PathEntry>>,
    pub fingerprint: Fingerprint,
}

pub fn checksum(values: &[f64]) -> String {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = OFFSET;
    for v in values {
        for byte in v.to_le_bytes() {
            h ^= u64::from(byte);
            h = h.wrapping_mul(PRIME);
        }
    }
    format!("{h:016x}")
}

fn resolve_beta(series: &TimeSeries, req: &SolveRequest) -> Result<f64> {
    match req.beta {
        Some(b) => Ok(b),
        None if series.len() < 2 => Ok(0.0),
        None => default_penalty(series.len(), req.sigma),
    }
}

/// Runs the requested solver and packages the outcome.
pub fn run(series: &TimeSeries, req: &SolveRequest) -> Result<(RunReport, RunTrace)> {
    let model = GaussianCost::new(req.sigma)?;
    let n = series.len();
    let method = req.method;
    if method.needs_kmax() && req.kmax.is_none() {
        return Err(Error::Contract(format!("method {method} requires kmax")));
    }

    let beta;
    let mut path = None;
    let (seg, trace): (Segmentation, RunTrace) = if method.is_constrained() {
        let kmax = req.kmax.unwrap_or(0);
        let (res, trace) = match method {
            Method::Sns => sns_solve(series, &model, kmax, req.trace)?,
            Method::Snip => snip_solve(series, &model, kmax, req.kappa, req.trace)?,
            _ => pdpa_solve(series, &model, kmax, req.trace)?,
        };
        // With a penalty, report the k minimizing C_k + βk; otherwise k = kmax.
        let k = match req.beta {
            Some(b) => res.best_penalised(b).0,
            None => kmax,
        };
        beta = req.beta;
        path = Some(
            res.segmentations
                .iter()
                .zip(&res.costs)
                .enumerate()
                .map(|(k, (s, &cost))| PathEntry {
                    k,
                    cost,
                    changepoints: s.changepoints.clone(),
                })
                .collect(),
        );
        let mut seg = res.segmentations[k].clone();
        seg.penalised_objective = req.beta.map(|b| seg.total_cost + b * k as f64);
        (seg, trace)
    } else {
        let b = resolve_beta(series, req)?;
        beta = Some(b);
        match method {
            Method::Op => op_solve(series, &model, b, req.trace)?,
            Method::Pelt => pelt_solve(series, &model, b, req.kappa, req.trace)?,
            Method::Fpop => fpop_solve(series, &model, b, req.trace)?,
            _ => {
                let kmax = req.kmax.unwrap_or(n.saturating_sub(1));
                binseg_solve(series, &model, kmax, b, req.trace)?
            }
        }
    };

    let report = RunReport {
        method,
        n,
        beta,
        kmax: req.kmax,
        k: seg.k(),
        changepoints: seg.changepoints,
        total_cost: seg.total_cost,
        penalised_objective: seg.penalised_objective,
        means: seg.means,
        wall_time_ms: trace.wall_time.as_secs_f64() * 1e3,
        trace: (req.trace != TraceLevel::Off).then(|| trace.counts.clone()),
        path,
        fingerprint: Fingerprint {
            n,
            checksum: checksum(series.values()),
            sigma: req.sigma,
            kappa: req.kappa,
        },
    };
    Ok((report, trace))
}
