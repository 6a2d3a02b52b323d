use serde::{Deserialize, Serialize};

/// Sorted, disjoint closed intervals.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IntervalUnion {
    intervals: Vec<(f64, f64)>,
}

impl IntervalUnion {
    /// Sorts, drops inverted pairs and merges overlapping or touching intervals.
    pub fn new(intervals: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let mut v: Vec<(f64, f64)> = intervals.into_iter().filter(|(lo, hi)| lo <= hi).collect();
        v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(v.len());
        for (lo, hi) in v {
            match merged.last_mut() {
                Some(last) if lo <= last.1 + 1e-12 => last.1 = last.1.max(hi),
                _ => merged.push((lo, hi)),
            }
        }
        Self { intervals: merged }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn point(x: f64) -> Self {
        Self { intervals: vec![(x, x)] }
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Smallest single interval containing the union.
    pub fn hull(&self) -> Option<(f64, f64)> {
        Some((self.intervals.first()?.0, self.intervals.last()?.1))
    }

    pub fn contains(&self, x: f64, tolerance: f64) -> bool {
        self.intervals.iter().any(|&(lo, hi)| x >= lo - tolerance && x <= hi + tolerance)
    }

    /// Every interval of `self` lies inside some interval of `other`, up to `tolerance`.
    pub fn is_subset_of(&self, other: &Self, tolerance: f64) -> bool {
        self.intervals.iter().all(|&(lo, hi)| other.intervals.iter().any(|&(a, b)| lo >= a - tolerance && hi <= b + tolerance))
    }
}
