// SPDX-License-Identifier: MIT OR Apache-2.0

//! Piecewise-quadratic representation of the best cost as a function of the
//! last segment's mean.
//!
//! Each live candidate `tau` owns a quadratic `a μ² + b μ + c` (the cost of
//! the data so far given a last change at `tau` and last-segment mean `μ`)
//! and the region of the working domain where that quadratic is the lowest
//! of all candidates. The regions of all live pieces partition the domain.

mod interval;

pub use interval::{IntervalSet, MIN_INTERVAL_LEN};

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{GaussianCost, TimeSeries};

/// One candidate's cost-in-μ and the μ-region where it is optimal.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadPiece {
    pub tau: usize,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub valid: IntervalSet,
}

impl QuadPiece {
    /// A piece that has absorbed no data yet: the constant `level`.
    pub fn constant(tau: usize, level: f64, valid: IntervalSet) -> Self {
        Self {
            tau,
            a: 0.0,
            b: 0.0,
            c: level,
            valid,
        }
    }

    #[inline]
    pub fn eval(&self, mu: f64) -> f64 {
        (self.a * mu + self.b) * mu + self.c
    }

    /// Minimum over the piece's own valid set, as `(value, argmin)`.
    pub fn min_over_valid(&self) -> Option<(f64, f64)> {
        self.valid
            .intervals()
            .iter()
            .map(|&(lo, hi)| {
                let mu = argmin_on(self.a, self.b, lo, hi);
                (self.eval(mu), mu)
            })
            .min_by(|x, y| x.0.total_cmp(&y.0))
    }

    /// `{μ ∈ domain : quad(μ) <= level}`: one interval or empty.
    pub fn threshold_interval(&self, level: f64, domain: (f64, f64)) -> IntervalSet {
        match level_bounds(self.a, self.b, self.c, level) {
            Some((lo, hi)) => IntervalSet::interval(lo.max(domain.0), hi.min(domain.1)),
            None => IntervalSet::empty(),
        }
    }
}

/// Result of minimizing the piecewise function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PiecewiseMin {
    pub value: f64,
    pub tau: usize,
    pub mu: f64,
}

/// One stretch of the domain and the slot of the piece that owns it.
#[derive(Debug, Clone, Copy)]
struct Seg {
    lo: f64,
    hi: f64,
    slot: u32,
}

#[derive(Debug, Clone, Copy)]
struct Quad {
    tau: usize,
    a: f64,
    b: f64,
    c: f64,
    // Sweep bookkeeping: segments kept, and the sub-level bounds (NaN until computed).
    hits: u32,
    roots: (f64, f64),
}

impl Quad {
    fn new(tau: usize, a: f64, b: f64, c: f64) -> Self {
        Self {
            tau,
            a,
            b,
            c,
            hits: 0,
            roots: UNSET,
        }
    }

    fn view(&self) -> QuadPiece {
        QuadPiece {
            tau: self.tau,
            a: self.a,
            b: self.b,
            c: self.c,
            valid: IntervalSet::empty(),
        }
    }
}

/// The working set of live candidates for one functional-pruning run.
///
/// Internally the domain is kept as a position-ordered list of segments, each
/// pointing at the quadratic that owns it, so a pruning pass is one sweep.
#[derive(Debug, Clone)]
pub struct PiecewiseState {
    quads: Vec<Quad>,
    segs: Vec<Seg>,
    scratch: Vec<Seg>,
    domain: (f64, f64),
    inv_two_var: f64,
}

/// Working domain for μ: the data hull widened by three noise scales.
pub fn domain_for(series: &TimeSeries, model: &GaussianCost) -> (f64, f64) {
    let (lo, hi) = series.min_max();
    let spread = 3.0 * model.sigma().max(series.sample_std());
    (lo - spread, hi + spread)
}

impl PiecewiseState {
    pub fn new(domain: (f64, f64), model: &GaussianCost) -> Result<Self> {
        let (lo, hi) = domain;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Contract(format!(
                "domain [{lo}, {hi}] must be finite and non-degenerate"
            )));
        }
        Ok(Self {
            quads: Vec::new(),
            segs: Vec::new(),
            scratch: Vec::new(),
            domain,
            inv_two_var: model.inv_two_var(),
        })
    }

    /// A state holding the single constant candidate `tau` valid on all of D.
    pub fn with_candidate(
        domain: (f64, f64),
        model: &GaussianCost,
        tau: usize,
        level: f64,
    ) -> Result<Self> {
        let mut state = Self::new(domain, model)?;
        state.push_piece(QuadPiece::constant(
            tau,
            level,
            IntervalSet::interval(domain.0, domain.1),
        ));
        Ok(state)
    }

    /// A state built from explicit pieces, whose valid sets must partition `domain`.
    pub fn from_pieces(
        domain: (f64, f64),
        model: &GaussianCost,
        pieces: impl IntoIterator<Item = QuadPiece>,
    ) -> Result<Self> {
        let mut state = Self::new(domain, model)?;
        for piece in pieces {
            state.push_piece(piece);
        }
        state.check_partition(MIN_INTERVAL_LEN)?;
        Ok(state)
    }

    /// Adds a piece as given, without checking it against the others.
    fn push_piece(&mut self, piece: QuadPiece) {
        let slot = self.quads.len() as u32;
        self.quads
            .push(Quad::new(piece.tau, piece.a, piece.b, piece.c));
        for &(lo, hi) in piece.valid.intervals() {
            self.segs.push(Seg { lo, hi, slot });
        }
        self.segs.sort_by(|x, y| x.lo.total_cmp(&y.lo));
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    /// Snapshot of the live pieces with their valid sets, ordered by the
    /// leftmost point they own.
    pub fn pieces(&self) -> Vec<QuadPiece> {
        let mut out: Vec<QuadPiece> = Vec::with_capacity(self.quads.len());
        let mut index = vec![usize::MAX; self.quads.len()];
        for seg in &self.segs {
            let slot = seg.slot as usize;
            if index[slot] == usize::MAX {
                index[slot] = out.len();
                out.push(self.quads[slot].view());
            }
            out[index[slot]].valid.push_sorted(seg.lo, seg.hi);
        }
        out
    }

    pub fn len(&self) -> usize {
        self.quads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quads.is_empty()
    }

    /// Labels of the live candidates, in no particular order.
    pub fn live_taus(&self) -> impl Iterator<Item = usize> + '_ {
        self.quads.iter().map(|q| q.tau)
    }

    /// Adds `γ(y, μ)` to every stored quadratic. Valid sets are untouched.
    pub fn add_point(&mut self, y: f64) -> Result<()> {
        if !y.is_finite() {
            return Err(Error::InvalidInput(format!("non-finite observation {y}")));
        }
        self.absorb(y);
        Ok(())
    }

    #[inline]
    pub(crate) fn absorb(&mut self, y: f64) {
        let w = self.inv_two_var;
        let db = -2.0 * y * w;
        let dc = y * y * w;
        for q in &mut self.quads {
            q.a += w;
            q.b += db;
            q.c += dc;
        }
    }

    /// Lowest value of the piecewise function; ties go to the smaller tau.
    pub fn global_min(&self) -> Result<PiecewiseMin> {
        self.minimum()
            .ok_or_else(|| Error::Contract("global_min on an empty state".into()))
    }

    #[inline]
    pub(crate) fn minimum(&self) -> Option<PiecewiseMin> {
        let mut lowest = Lowest::default();
        for seg in &self.segs {
            let q = &self.quads[seg.slot as usize];
            lowest.offer(q.tau, q.a, q.b, q.c, seg.lo, seg.hi);
        }
        lowest.best
    }

    /// Restricts every piece to where it stays at or below `level`, drops
    /// pieces left with nothing, and hands the uncovered remainder of the
    /// domain to a new constant candidate `new_tau` at `level`.
    ///
    /// Labels of dropped pieces are appended to `pruned`.
    pub fn prune_and_insert(&mut self, level: f64, new_tau: usize, pruned: &mut Vec<usize>) {
        let (dlo, dhi) = self.domain;
        let new_slot = self.quads.len() as u32;
        let mut run = FreeRun::new(std::mem::take(&mut self.scratch), new_slot);
        if self.segs.is_empty() {
            run.free(dlo, dhi);
        }
        for seg in &self.segs {
            let q = &mut self.quads[seg.slot as usize];
            // Convexity: both ends under the level means the whole segment is.
            if q.eval(seg.lo) <= level && q.eval(seg.hi) <= level {
                run.keep(*seg);
                q.hits += 1;
                continue;
            }
            // A piece owning several segments needs its roots only once.
            if q.roots.0.is_nan() {
                q.roots = level_bounds(q.a, q.b, q.c, level)
                    .unwrap_or((f64::INFINITY, f64::NEG_INFINITY));
            }
            let (r1, r2) = q.roots;
            let (lo, hi) = (fmax(fmax(seg.lo, r1), dlo), fmin(fmin(seg.hi, r2), dhi));
            if hi - lo < MIN_INTERVAL_LEN {
                run.free(seg.lo, seg.hi);
                continue;
            }
            if lo > seg.lo {
                run.free(seg.lo, lo);
            }
            run.keep(Seg {
                lo,
                hi,
                slot: seg.slot,
            });
            q.hits += 1;
            if hi < seg.hi {
                run.free(hi, seg.hi);
            }
        }
        let (mut out, used) = run.finish();
        std::mem::swap(&mut self.segs, &mut out);
        self.scratch = out;

        if used {
            let mut quad = Quad::new(new_tau, 0.0, 0.0, level);
            quad.hits = 1;
            self.quads.push(quad);
        } else {
            pruned.push(new_tau);
        }

        // Drop pieces that own nothing. Walking backwards, the slot moved in
        // by `swap_remove` has already been visited.
        for slot in (0..self.quads.len()).rev() {
            let q = &mut self.quads[slot];
            if q.hits > 0 {
                q.hits = 0;
                q.roots = UNSET;
                continue;
            }
            pruned.push(q.tau);
            let last = (self.quads.len() - 1) as u32;
            self.quads.swap_remove(slot);
            if slot as u32 != last {
                for seg in &mut self.segs {
                    if seg.slot == last {
                        seg.slot = slot as u32;
                    }
                }
            }
        }
    }

    /// `add_point(y)` followed by [`Self::prune_and_insert`] at `new_level`.
    /// Returns the labels pruned in this step.
    pub fn step(&mut self, y: f64, new_level: f64, new_tau: usize) -> Result<Vec<usize>> {
        self.add_point(y)?;
        let mut pruned = Vec::new();
        self.prune_and_insert(new_level, new_tau, &mut pruned);
        Ok(pruned)
    }

    /// Checks that the valid sets are non-empty, pairwise disjoint and cover
    /// the domain up to `tol` in total length.
    pub fn check_partition(&self, tol: f64) -> Result<()> {
        let mut owned = vec![false; self.quads.len()];
        for w in self.segs.windows(2) {
            if w[1].lo < w[0].hi - tol {
                return Err(self.breach(&format!(
                    "tau={} and tau={} overlap on [{}, {}]",
                    self.quads[w[0].slot as usize].tau,
                    self.quads[w[1].slot as usize].tau,
                    w[1].lo,
                    w[0].hi
                )));
            }
        }
        let mut total = 0.0;
        for seg in &self.segs {
            owned[seg.slot as usize] = true;
            total += seg.hi - seg.lo;
        }
        if let Some(q) = self
            .quads
            .iter()
            .zip(&owned)
            .find_map(|(q, &o)| (!o).then_some(q))
        {
            return Err(self.breach(&format!("piece tau={} has an empty set", q.tau)));
        }
        let width = self.domain.1 - self.domain.0;
        if (total - width).abs() > tol {
            return Err(self.breach(&format!("sets cover {total} of a domain of width {width}")));
        }
        Ok(())
    }

    fn breach(&self, what: &str) -> Error {
        let mut dump = format!("{what}; domain [{}, {}]", self.domain.0, self.domain.1);
        for p in self.pieces() {
            let _ = write!(
                dump,
                "\n  tau={} a={} b={} c={} valid={:?}",
                p.tau,
                p.a,
                p.b,
                p.c,
                p.valid.intervals()
            );
        }
        Error::Internal(dump)
    }
}

/// Builds the next segment list, collecting freed stretches into runs that
/// go to the incoming candidate.
struct FreeRun {
    out: Vec<Seg>,
    // Pending stretch; `lo > hi` when there is none.
    lo: f64,
    hi: f64,
    slot: u32,
    used: bool,
}

impl FreeRun {
    fn new(mut out: Vec<Seg>, slot: u32) -> Self {
        out.clear();
        Self {
            out,
            lo: f64::INFINITY,
            hi: f64::NEG_INFINITY,
            slot,
            used: false,
        }
    }

    #[inline]
    fn free(&mut self, lo: f64, hi: f64) {
        if lo - self.hi < MIN_INTERVAL_LEN {
            self.hi = fmax(self.hi, hi);
        } else {
            self.flush();
            self.lo = lo;
            self.hi = hi;
        }
    }

    #[inline]
    fn keep(&mut self, seg: Seg) {
        self.flush();
        self.out.push(seg);
    }

    #[inline]
    fn flush(&mut self) {
        if self.hi - self.lo >= MIN_INTERVAL_LEN {
            self.out.push(Seg {
                lo: self.lo,
                hi: self.hi,
                slot: self.slot,
            });
            self.used = true;
        }
        self.lo = f64::INFINITY;
        self.hi = f64::NEG_INFINITY;
    }

    fn finish(mut self) -> (Vec<Seg>, bool) {
        self.flush();
        (self.out, self.used)
    }
}

/// Running minimum over segments; ties go to the smaller tau, then to the
/// segment seen first.
#[derive(Debug, Default)]
struct Lowest {
    best: Option<PiecewiseMin>,
}

impl Lowest {
    #[inline]
    fn offer(&mut self, tau: usize, a: f64, b: f64, c: f64, lo: f64, hi: f64) {
        let mu = argmin_on(a, b, lo, hi);
        let value = (a * mu + b) * mu + c;
        let better = match self.best {
            None => true,
            Some(m) => value < m.value || (value == m.value && tau < m.tau),
        };
        if better {
            self.best = Some(PiecewiseMin { value, tau, mu });
        }
    }
}

impl Quad {
    #[inline]
    fn eval(&self, mu: f64) -> f64 {
        (self.a * mu + self.b) * mu + self.c
    }
}

const UNSET: (f64, f64) = (f64::NAN, f64::NAN);

// Plain comparisons: the operands here are never NaN, and the std versions
// pay for NaN handling on the hot path.
#[inline]
fn fmax(x: f64, y: f64) -> f64 {
    if x >= y {
        x
    } else {
        y
    }
}

#[inline]
fn fmin(x: f64, y: f64) -> f64 {
    if x <= y {
        x
    } else {
        y
    }
}

/// Minimiser of `a μ² + b μ` over `[lo, hi]`.
#[inline]
fn argmin_on(a: f64, b: f64, lo: f64, hi: f64) -> f64 {
    if a > 0.0 {
        fmin(fmax(-b / (2.0 * a), lo), hi)
    } else if b < 0.0 {
        hi
    } else {
        lo
    }
}

/// Sub-level set `{μ : a μ² + b μ + c <= level}` as a `(lo, hi)` pair, not
/// clipped to any domain.
#[inline]
fn level_bounds(a: f64, b: f64, c: f64, level: f64) -> Option<(f64, f64)> {
    let shifted = c - level;
    if a <= 0.0 {
        // Constant piece: all or nothing.
        return (b == 0.0 && shifted <= 0.0).then_some((f64::NEG_INFINITY, f64::INFINITY));
    }
    let disc = b * b - 4.0 * a * shifted;
    if disc < 0.0 {
        return None;
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    if q == 0.0 {
        // b = 0 and the level touches the vertex exactly.
        return Some((0.0, 0.0));
    }
    let r1 = q / a;
    let r2 = shifted / q;
    Some(if r1 <= r2 { (r1, r2) } else { (r2, r1) })
}
