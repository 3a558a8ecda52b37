//! Finite unions of half-open real intervals, the measurable parameter sets
//! attached to one-parameter wall families.

use serde::{Deserialize, Serialize};

/// A finite union of disjoint, nonempty, sorted half-open intervals `[lo, hi)`.
///
/// All set operations return the same canonical form, so equality of interval
/// sets is structural equality.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalSet {
    intervals: Vec<(f64, f64)>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet { intervals: Vec::new() }
    }

    /// A single interval `[lo, hi)`; empty when `lo >= hi`.
    pub fn interval(lo: f64, hi: f64) -> Self {
        if lo < hi {
            IntervalSet { intervals: vec![(lo, hi)] }
        } else {
            IntervalSet::empty()
        }
    }

    /// The degenerate half-open cell `[pos, pos + 1/2)` standing in for a
    /// single atom of a discrete wall family. The width is immaterial: atomic
    /// densities count atom positions, not Lebesgue mass.
    pub fn atom(pos: f64) -> Self {
        IntervalSet::interval(pos, pos + 0.5)
    }

    pub fn from_intervals<I: IntoIterator<Item = (f64, f64)>>(iter: I) -> Self {
        let mut s = IntervalSet::empty();
        for (lo, hi) in iter {
            s = s.union(&IntervalSet::interval(lo, hi));
        }
        s
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, t: f64) -> bool {
        self.intervals.iter().any(|&(lo, hi)| lo <= t && t < hi)
    }

    /// Total Lebesgue length.
    pub fn lebesgue(&self) -> f64 {
        self.intervals.iter().map(|&(lo, hi)| hi - lo).sum()
    }

    /// Number of integer points contained in the set.
    pub fn integer_count(&self) -> u64 {
        self.intervals
            .iter()
            .map(|&(lo, hi)| {
                let first = lo.ceil() as i64;
                let last = if hi.fract() == 0.0 { hi as i64 - 1 } else { hi.floor() as i64 };
                if last >= first {
                    (last - first + 1) as u64
                } else {
                    0
                }
            })
            .sum()
    }

    /// Integer points contained in the set, in increasing order.
    pub fn integer_points(&self) -> Vec<i64> {
        let mut out = Vec::new();
        for &(lo, hi) in &self.intervals {
            let first = lo.ceil() as i64;
            let last = if hi.fract() == 0.0 { hi as i64 - 1 } else { hi.floor() as i64 };
            for k in first..=last {
                out.push(k);
            }
        }
        out
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        let mut merged: Vec<(f64, f64)> =
            self.intervals.iter().chain(other.intervals.iter()).cloned().collect();
        merged.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(merged.len());
        for (lo, hi) in merged {
            match out.last_mut() {
                Some(last) if lo <= last.1 => {
                    if hi > last.1 {
                        last.1 = hi;
                    }
                }
                _ => out.push((lo, hi)),
            }
        }
        IntervalSet { intervals: out }
    }

    pub fn intersection(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.intervals.len() && j < other.intervals.len() {
            let (alo, ahi) = self.intervals[i];
            let (blo, bhi) = other.intervals[j];
            let lo = alo.max(blo);
            let hi = ahi.min(bhi);
            if lo < hi {
                out.push((lo, hi));
            }
            if ahi <= bhi {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet { intervals: out }
    }

    pub fn difference(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        for &(alo, ahi) in &self.intervals {
            let mut lo = alo;
            for &(blo, bhi) in &other.intervals {
                if bhi <= lo {
                    continue;
                }
                if blo >= ahi {
                    break;
                }
                if blo > lo {
                    out.push((lo, blo.min(ahi)));
                }
                lo = lo.max(bhi);
                if lo >= ahi {
                    break;
                }
            }
            if lo < ahi {
                out.push((lo, ahi));
            }
        }
        IntervalSet { intervals: out }
    }

    pub fn symmetric_difference(&self, other: &IntervalSet) -> IntervalSet {
        self.difference(other).union(&other.difference(self))
    }
}

/// The density a chart carries on its parameter line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Density {
    /// Lebesgue measure: length of the parameter set.
    Lebesgue,
    /// Atoms of a common weight sitting at the integer points of the line.
    UniformAtoms { weight: f64 },
    /// An explicit finite atom list `(position, weight)`.
    Weighted(Vec<(f64, f64)>),
}

impl Density {
    pub fn measure(&self, set: &IntervalSet) -> f64 {
        match self {
            Density::Lebesgue => set.lebesgue(),
            Density::UniformAtoms { weight } => *weight * set.integer_count() as f64,
            Density::Weighted(atoms) => atoms
                .iter()
                .filter(|&&(pos, _)| set.contains(pos))
                .map(|&(_, w)| w)
                .sum(),
        }
    }
}
