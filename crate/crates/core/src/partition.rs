use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A closed interval `[a, b]` of `[n]`, 1-based and inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "(usize, usize)", into = "(usize, usize)")]
pub struct Interval {
    a: usize,
    b: usize,
}

impl Interval {
    /// Checks `1 <= a <= b <= n`.
    pub fn new(a: usize, b: usize, n: usize) -> Result<Self> {
        if a == 0 || a > b || b > n {
            return Err(Error::InvalidInterval { a, b, n });
        }
        Ok(Interval { a, b })
    }

    pub fn singleton(i: usize) -> Self {
        assert!(i >= 1, "points are 1-based");
        Interval { a: i, b: i }
    }

    /// Caller guarantees `1 <= a <= b`.
    pub(crate) fn raw(a: usize, b: usize) -> Self {
        debug_assert!(a >= 1 && a <= b);
        Interval { a, b }
    }

    pub fn start(self) -> usize {
        self.a
    }

    pub fn end(self) -> usize {
        self.b
    }

    /// Number of points; intervals are never empty.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(self) -> usize {
        self.b - self.a + 1
    }

    pub fn is_singleton(self) -> bool {
        self.a == self.b
    }

    pub fn contains(self, i: usize) -> bool {
        self.a <= i && i <= self.b
    }

    pub fn points(self) -> core::ops::RangeInclusive<usize> {
        self.a..=self.b
    }
}

impl TryFrom<(usize, usize)> for Interval {
    type Error = Error;

    fn try_from((a, b): (usize, usize)) -> Result<Self> {
        Interval::new(a, b, b)
    }
}

impl From<Interval> for (usize, usize) {
    fn from(i: Interval) -> Self {
        (i.a, i.b)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.a, self.b)
    }
}

/// Ordered, disjoint intervals whose union is exactly `[n]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PartitionWire", into = "PartitionWire")]
pub struct IntervalPartition {
    n: usize,
    intervals: Vec<Interval>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PartitionWire {
    n: usize,
    intervals: Vec<Interval>,
}

impl TryFrom<PartitionWire> for IntervalPartition {
    type Error = Error;

    fn try_from(w: PartitionWire) -> Result<Self> {
        IntervalPartition::new(w.n, w.intervals)
    }
}

impl From<IntervalPartition> for PartitionWire {
    fn from(p: IntervalPartition) -> Self {
        PartitionWire {
            n: p.n,
            intervals: p.intervals,
        }
    }
}

impl IntervalPartition {
    pub fn new(n: usize, intervals: Vec<Interval>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyDomain);
        }
        if intervals.is_empty() {
            return Err(Error::InvalidPartition("no intervals".into()));
        }
        let mut next = 1;
        for iv in &intervals {
            if iv.a != next {
                return Err(Error::InvalidPartition(format!(
                    "expected an interval starting at {next}, found {iv}"
                )));
            }
            next = iv.b + 1;
        }
        if next != n + 1 {
            return Err(Error::InvalidPartition(format!(
                "intervals cover [1, {}] instead of [1, {n}]",
                next - 1
            )));
        }
        Ok(IntervalPartition { n, intervals })
    }

    pub fn from_bounds(n: usize, bounds: &[(usize, usize)]) -> Result<Self> {
        let intervals = bounds
            .iter()
            .map(|&(a, b)| Interval::new(a, b, n))
            .collect::<Result<Vec<_>>>()?;
        IntervalPartition::new(n, intervals)
    }

    /// Builds the partition whose intervals end at the given (sorted,
    /// distinct) right endpoints; the last one must be `n`.
    pub fn from_right_ends(n: usize, ends: &[usize]) -> Result<Self> {
        let mut intervals = Vec::with_capacity(ends.len());
        let mut start = 1;
        for &b in ends {
            intervals.push(Interval::new(start, b, n)?);
            start = b + 1;
        }
        IntervalPartition::new(n, intervals)
    }

    pub fn singletons(n: usize) -> Result<Self> {
        IntervalPartition::new(n, (1..=n).map(Interval::singleton).collect())
    }

    pub fn whole(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyDomain);
        }
        IntervalPartition::new(n, alloc::vec![Interval::raw(1, n)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of intervals.
    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Interval> {
        self.intervals.iter()
    }

    /// Index of the interval containing point `i`.
    pub fn locate(&self, i: usize) -> Option<usize> {
        if i == 0 || i > self.n {
            return None;
        }
        Some(self.intervals.partition_point(|iv| iv.b < i))
    }

    pub fn right_ends(&self) -> impl Iterator<Item = usize> + '_ {
        self.intervals.iter().map(|iv| iv.b)
    }

    /// The common refinement: all non-empty intersections `I ∩ J`.
    pub fn common_refinement(&self, other: &IntervalPartition) -> Result<IntervalPartition> {
        if self.n != other.n {
            return Err(Error::DomainMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let mut ends = Vec::with_capacity(self.len() + other.len());
        let (mut x, mut y) = (self.right_ends().peekable(), other.right_ends().peekable());
        loop {
            let next = match (x.peek(), y.peek()) {
                (Some(&a), Some(&b)) => a.min(b),
                (Some(&a), None) => a,
                (None, Some(&b)) => b,
                (None, None) => break,
            };
            if x.peek() == Some(&next) {
                x.next();
            }
            if y.peek() == Some(&next) {
                y.next();
            }
            ends.push(next);
        }
        IntervalPartition::from_right_ends(self.n, &ends)
    }

    /// True iff every interval of `coarser` is a union of intervals of
    /// `self`, i.e. every boundary of `coarser` is a boundary of `self`.
    pub fn refines(&self, coarser: &IntervalPartition) -> bool {
        if self.n != coarser.n {
            return false;
        }
        let mut own = self.right_ends().peekable();
        coarser.right_ends().all(|b| {
            while own.peek().is_some_and(|&e| e < b) {
                own.next();
            }
            own.peek() == Some(&b)
        })
    }
}
