// SPDX-License-Identifier: MIT OR Apache-2.0

use smallvec::SmallVec;

/// Intervals shorter than this are dropped by intersection and difference.
pub const MIN_INTERVAL_LEN: f64 = 1e-12;

/// A finite union of closed, sorted, pairwise disjoint intervals.
///
/// Most optimality regions are one or two intervals wide, so the storage is
/// inline for up to two pieces.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IntervalSet {
    spans: SmallVec<[(f64, f64); 2]>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// A single closed interval; empty when `lo > hi` or either bound is NaN.
    pub fn interval(lo: f64, hi: f64) -> Self {
        let mut spans = SmallVec::new();
        if lo <= hi {
            spans.push((lo, hi));
        }
        Self { spans }
    }

    /// Normalizes arbitrary `(lo, hi)` pairs: drops inverted pairs, sorts and
    /// merges overlapping or touching intervals.
    pub fn from_intervals<I: IntoIterator<Item = (f64, f64)>>(intervals: I) -> Self {
        let mut raw: SmallVec<[(f64, f64); 2]> =
            intervals.into_iter().filter(|&(lo, hi)| lo <= hi).collect();
        raw.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut spans: SmallVec<[(f64, f64); 2]> = SmallVec::with_capacity(raw.len());
        for (lo, hi) in raw {
            match spans.last_mut() {
                Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
                _ => spans.push((lo, hi)),
            }
        }
        Self { spans }
    }

    /// Appends `[lo, hi]`, which must lie strictly right of every stored interval.
    pub(crate) fn push_sorted(&mut self, lo: f64, hi: f64) {
        debug_assert!(lo <= hi && self.spans.last().is_none_or(|l| l.1 < lo));
        self.spans.push((lo, hi));
    }

    pub fn is_empty(&self) -> bool {
        self.spans.is_empty()
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.spans
    }

    pub fn len(&self) -> usize {
        self.spans.len()
    }

    pub fn total_length(&self) -> f64 {
        self.spans.iter().map(|(lo, hi)| hi - lo).sum()
    }

    pub fn lower_bound(&self) -> Option<f64> {
        self.spans.first().map(|s| s.0)
    }

    pub fn upper_bound(&self) -> Option<f64> {
        self.spans.last().map(|s| s.1)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.spans.iter().any(|&(lo, hi)| lo <= x && x <= hi)
    }

    /// Exact intersection; results shorter than [`MIN_INTERVAL_LEN`] are dropped.
    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let mut spans = SmallVec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.spans.len() && j < other.spans.len() {
            let (alo, ahi) = self.spans[i];
            let (blo, bhi) = other.spans[j];
            let lo = alo.max(blo);
            let hi = ahi.min(bhi);
            if hi - lo >= MIN_INTERVAL_LEN {
                spans.push((lo, hi));
            }
            if ahi < bhi {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet { spans }
    }

    /// In-place intersection with the single interval `[lo, hi]`.
    pub fn clip(&mut self, lo: f64, hi: f64) {
        let mut kept = 0;
        for r in 0..self.spans.len() {
            let (a, b) = self.spans[r];
            let (a, b) = (a.max(lo), b.min(hi));
            if b - a >= MIN_INTERVAL_LEN {
                self.spans[kept] = (a, b);
                kept += 1;
            }
        }
        self.spans.truncate(kept);
    }

    /// Set difference `self \ cut`. Slivers shorter than
    /// [`MIN_INTERVAL_LEN`] are dropped from the result, and cut intervals
    /// that short remove nothing.
    pub fn subtract(&self, cut: &IntervalSet) -> IntervalSet {
        let mut spans = SmallVec::new();
        let mut j = 0;
        for &(lo, hi) in &self.spans {
            let mut cursor = lo;
            while j < cut.spans.len() && cut.spans[j].1 < cursor {
                j += 1;
            }
            let mut k = j;
            while k < cut.spans.len() && cut.spans[k].0 <= hi {
                let (clo, chi) = cut.spans[k];
                k += 1;
                if chi - clo < MIN_INTERVAL_LEN {
                    continue;
                }
                if clo - cursor >= MIN_INTERVAL_LEN {
                    spans.push((cursor, clo));
                }
                cursor = cursor.max(chi);
            }
            if hi - cursor >= MIN_INTERVAL_LEN {
                spans.push((cursor, hi));
            }
        }
        IntervalSet { spans }
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        Self::from_intervals(self.spans.iter().chain(other.spans.iter()).copied())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(v: &[(f64, f64)]) -> IntervalSet {
        IntervalSet::from_intervals(v.iter().copied())
    }

    #[test]
    fn intersect_examples() {
        assert_eq!(
            set(&[(0.0, 5.0)]).intersect(&set(&[(3.0, 8.0)])),
            set(&[(3.0, 5.0)])
        );
        assert_eq!(
            set(&[(0.0, 1.0), (4.0, 6.0)]).intersect(&set(&[(0.5, 5.0)])),
            set(&[(0.5, 1.0), (4.0, 5.0)])
        );
        assert!(set(&[(0.0, 5.0)])
            .intersect(&IntervalSet::empty())
            .is_empty());
        assert!(IntervalSet::empty()
            .intersect(&set(&[(0.0, 5.0)]))
            .is_empty());
    }

    #[test]
    fn subtract_examples() {
        assert_eq!(
            set(&[(0.0, 10.0)]).subtract(&set(&[(2.0, 3.0)])),
            set(&[(0.0, 2.0), (3.0, 10.0)])
        );
        assert!(set(&[(0.0, 10.0)])
            .subtract(&set(&[(0.0, 10.0)]))
            .is_empty());
        assert_eq!(
            set(&[(0.0, 10.0)]).subtract(&IntervalSet::empty()),
            set(&[(0.0, 10.0)])
        );
        assert_eq!(
            set(&[(0.0, 2.0), (5.0, 9.0)]).subtract(&set(&[(1.0, 6.0), (8.0, 20.0)])),
            set(&[(0.0, 1.0), (6.0, 8.0)])
        );
    }

    #[test]
    fn normalization_merges_and_sorts() {
        let s = set(&[(4.0, 6.0), (0.0, 1.0), (0.5, 2.0), (3.0, 2.0)]);
        assert_eq!(s.intervals(), &[(0.0, 2.0), (4.0, 6.0)]);
        assert_eq!(IntervalSet::interval(1.0, 0.0), IntervalSet::empty());
        assert_eq!(IntervalSet::interval(0.0, 0.0).len(), 1);
    }

    #[test]
    fn short_pieces_dropped() {
        let a = set(&[(0.0, 1.0)]);
        let b = set(&[(1.0 - 1e-14, 2.0)]);
        assert!(a.intersect(&b).is_empty());
        let mut c = a.clone();
        c.clip(0.5, 0.5 + 1e-13);
        assert!(c.is_empty());
    }

    fn arb_set() -> impl Strategy<Value = IntervalSet> {
        prop::collection::vec((-20i32..20, 0i32..6), 0..5).prop_map(|v| {
            IntervalSet::from_intervals(v.into_iter().map(|(lo, w)| (lo as f64, (lo + w) as f64)))
        })
    }

    fn normalized(s: &IntervalSet) -> bool {
        s.intervals().iter().all(|&(lo, hi)| lo <= hi)
            && s.intervals().windows(2).all(|w| w[0].1 < w[1].0)
    }

    proptest! {
        // Half-integer probes never land on the integer endpoints used here.
        #[test]
        fn set_algebra_matches_membership(a in arb_set(), b in arb_set(), probe in -50i32..50) {
            let x = probe as f64 + 0.5;
            let inter = a.intersect(&b);
            let diff = a.subtract(&b);
            let uni = a.union(&b);
            prop_assert!(normalized(&inter) && normalized(&diff) && normalized(&uni));
            prop_assert_eq!(inter.contains(x), a.contains(x) && b.contains(x));
            prop_assert_eq!(diff.contains(x), a.contains(x) && !b.contains(x));
            prop_assert_eq!(uni.contains(x), a.contains(x) || b.contains(x));
            let total = inter.total_length() + diff.total_length();
            prop_assert!((total - a.total_length()).abs() < 1e-9);
        }
    }
}
