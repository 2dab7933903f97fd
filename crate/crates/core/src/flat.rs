use alloc::borrow::Cow;
use alloc::format;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::distribution::{Distribution, Pmf, NORMALIZATION_TOLERANCE};
use crate::error::{Error, Result};
use crate::partition::{Interval, IntervalPartition};

/// A piecewise-constant distribution: a partition plus the mass of each
/// interval, spread evenly over the interval's points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FlatWire", into = "FlatWire")]
pub struct FlatHypothesis {
    partition: IntervalPartition,
    masses: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FlatWire {
    n: usize,
    intervals: Vec<Interval>,
    masses: Vec<f64>,
}

impl TryFrom<FlatWire> for FlatHypothesis {
    type Error = Error;

    fn try_from(w: FlatWire) -> Result<Self> {
        FlatHypothesis::new(IntervalPartition::new(w.n, w.intervals)?, w.masses)
    }
}

impl From<FlatHypothesis> for FlatWire {
    fn from(h: FlatHypothesis) -> Self {
        FlatWire {
            n: h.partition.n(),
            intervals: h.partition.intervals().to_vec(),
            masses: h.masses,
        }
    }
}

impl FlatHypothesis {
    pub fn new(partition: IntervalPartition, masses: Vec<f64>) -> Result<Self> {
        if masses.len() != partition.len() {
            return Err(Error::InvalidProbabilities(format!(
                "{} masses for {} intervals",
                masses.len(),
                partition.len()
            )));
        }
        if masses.iter().any(|&w| !w.is_finite() || w < 0.0) {
            return Err(Error::InvalidProbabilities(
                "interval masses must be finite and non-negative".into(),
            ));
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::InvalidProbabilities(format!(
                "interval masses sum to {total}"
            )));
        }
        Ok(FlatHypothesis { partition, masses })
    }

    pub fn partition(&self) -> &IntervalPartition {
        &self.partition
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    /// Number of bins.
    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn to_distribution(&self) -> Distribution {
        Distribution::new(self.dense().into_owned()).expect("flat masses are normalized")
    }
}

impl Pmf for FlatHypothesis {
    fn domain_size(&self) -> usize {
        self.partition.n()
    }

    fn prob(&self, i: usize) -> f64 {
        let j = self.partition.locate(i).expect("point inside the domain");
        self.masses[j] / self.partition.intervals()[j].len() as f64
    }

    fn mass(&self, interval: Interval) -> f64 {
        let (first, last) = (
            self.partition
                .locate(interval.start())
                .expect("point inside the domain"),
            self.partition
                .locate(interval.end())
                .expect("point inside the domain"),
        );
        (first..=last)
            .map(|j| {
                let bin = self.partition.intervals()[j];
                let lo = bin.start().max(interval.start());
                let hi = bin.end().min(interval.end());
                self.masses[j] * (hi - lo + 1) as f64 / bin.len() as f64
            })
            .sum()
    }

    fn dense(&self) -> Cow<'_, [f64]> {
        let mut out = Vec::with_capacity(self.partition.n());
        for (bin, &w) in self.partition.iter().zip(&self.masses) {
            let v = w / bin.len() as f64;
            out.extend(core::iter::repeat_n(v, bin.len()));
        }
        Cow::Owned(out)
    }
}

/// Replaces `p` on each interval of `partition` by its average there.
pub fn flatten<P: Pmf + ?Sized>(p: &P, partition: &IntervalPartition) -> Result<FlatHypothesis> {
    if p.domain_size() != partition.n() {
        return Err(Error::DomainMismatch {
            left: p.domain_size(),
            right: partition.n(),
        });
    }
    let masses = partition.iter().map(|&iv| p.mass(iv)).collect();
    FlatHypothesis::new(partition.clone(), masses)
}
