// SPDX-License-Identifier: MIT OR Apache-2.0

//! Exact changepoint detection for a change in mean.
//!
//! Penalised solvers ([`op_solve`], [`pelt_solve`], [`fpop_solve`]) minimise
//! the segment cost plus `β` per changepoint; constrained solvers
//! ([`sns_solve`], [`snip_solve`], [`pdpa_solve`]) return the best
//! segmentation for every changepoint count up to `kmax`. The pruned
//! variants return exactly what their unpruned counterparts return, only
//! faster. [`oracle`] brute-forces small inputs for cross-checking.

pub mod algorithms;
pub mod bench;
mod error;
pub mod model;
pub mod oracle;
pub mod piecewise;
pub mod report;
pub mod sim;

pub use algorithms::{
    binseg_solve, fpop_solve, op_solve, pdpa_solve, pelt_solve, penalised_constrained_consistency,
    snip_solve, sns_solve, Consistency, ConstrainedResult, Fpop, Method, RunTrace, Segmentation,
    TraceLevel,
};
pub use error::{Error, Result};
pub use model::{default_penalty, CostModel, GaussianCost, Penalty, TimeSeries};

/// `|a - b| <= tol · max(1, |a|, |b|)`: relative, with an absolute floor
/// near zero.
pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
}
