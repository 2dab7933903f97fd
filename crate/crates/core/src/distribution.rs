use alloc::borrow::Cow;
use alloc::format;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::Interval;

/// Allowed deviation of a probability vector's total from 1.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// Anything that assigns probability to the points of `[n]`.
///
/// Points are 1-based throughout.
pub trait Pmf {
    fn domain_size(&self) -> usize;

    fn prob(&self, i: usize) -> f64;

    /// Mass of a closed interval.
    fn mass(&self, interval: Interval) -> f64;

    /// The point masses as a dense vector (index `i - 1` holds point `i`).
    fn dense(&self) -> Cow<'_, [f64]> {
        Cow::Owned((1..=self.domain_size()).map(|i| self.prob(i)).collect())
    }
}

/// An explicit probability vector over `[n]` with cached prefix sums.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistributionWire", into = "DistributionWire")]
pub struct Distribution {
    probs: Vec<f64>,
    prefix: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DistributionWire {
    n: usize,
    probs: Vec<f64>,
}

impl TryFrom<DistributionWire> for Distribution {
    type Error = Error;

    fn try_from(wire: DistributionWire) -> Result<Self> {
        if wire.n != wire.probs.len() {
            return Err(Error::InvalidProbabilities(format!(
                "n = {} but {} probabilities given",
                wire.n,
                wire.probs.len()
            )));
        }
        Distribution::new(wire.probs)
    }
}

impl From<Distribution> for DistributionWire {
    fn from(p: Distribution) -> Self {
        DistributionWire {
            n: p.probs.len(),
            probs: p.probs,
        }
    }
}

impl Distribution {
    /// Validates `probs` as a probability vector: non-empty, finite,
    /// non-negative, summing to 1 within [`NORMALIZATION_TOLERANCE`].
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::EmptyDomain);
        }
        if let Some(i) = probs.iter().position(|&x| !x.is_finite() || x < 0.0) {
            return Err(Error::InvalidProbabilities(format!(
                "entry {} is {}",
                i + 1,
                probs[i]
            )));
        }
        let prefix = prefix_sums(&probs);
        let total = prefix[prefix.len() - 1];
        if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::InvalidProbabilities(format!(
                "total mass {total} is not 1"
            )));
        }
        Ok(Distribution { probs, prefix })
    }

    /// Normalizes non-negative weights into a distribution.
    pub fn from_weights(mut weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyDomain);
        }
        if weights.iter().any(|&w| !w.is_finite() || w < 0.0) {
            return Err(Error::InvalidProbabilities(
                "weights must be finite and non-negative".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidProbabilities("weights sum to zero".into()));
        }
        for w in &mut weights {
            *w /= total;
        }
        Distribution::new(weights)
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyDomain);
        }
        Distribution::new(alloc::vec![1.0 / n as f64; n])
    }

    /// All mass on the point `at`.
    pub fn point_mass(n: usize, at: usize) -> Result<Self> {
        let at = Interval::new(at, at, n)?.start();
        let mut probs = alloc::vec![0.0; n];
        probs[at - 1] = 1.0;
        Distribution::new(probs)
    }

    pub fn n(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// `p([1, j])`.
    pub fn cdf(&self, j: usize) -> f64 {
        if j == 0 {
            0.0
        } else {
            self.prefix[j - 1]
        }
    }

    /// The conditional distribution `p^S` on `interval`, as a distribution
    /// over `[1, |S|]`.
    pub fn restrict(&self, interval: Interval) -> Result<Distribution> {
        self.check_interval(interval)?;
        let slice = &self.probs[interval.start() - 1..interval.end()];
        Distribution::from_weights(slice.to_vec())
    }

    fn check_interval(&self, interval: Interval) -> Result<()> {
        if interval.end() > self.n() {
            return Err(Error::InvalidInterval {
                a: interval.start(),
                b: interval.end(),
                n: self.n(),
            });
        }
        Ok(())
    }
}

impl Pmf for Distribution {
    fn domain_size(&self) -> usize {
        self.probs.len()
    }

    fn prob(&self, i: usize) -> f64 {
        self.probs[i - 1]
    }

    fn mass(&self, interval: Interval) -> f64 {
        self.cdf(interval.end()) - self.cdf(interval.start() - 1)
    }

    fn dense(&self) -> Cow<'_, [f64]> {
        Cow::Borrowed(&self.probs)
    }
}

pub(crate) fn prefix_sums(values: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    values
        .iter()
        .map(|&x| {
            acc += x;
            acc
        })
        .collect()
}

/// Sample counts over `[n]`; the empirical distribution `p̂_m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "EmpiricalWire", into = "EmpiricalWire")]
pub struct EmpiricalDistribution {
    counts: Vec<u64>,
    prefix: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EmpiricalWire {
    n: usize,
    m: u64,
    counts: Vec<u64>,
}

impl TryFrom<EmpiricalWire> for EmpiricalDistribution {
    type Error = Error;

    fn try_from(wire: EmpiricalWire) -> Result<Self> {
        if wire.n != wire.counts.len() {
            return Err(Error::InvalidProbabilities(format!(
                "n = {} but {} counts given",
                wire.n,
                wire.counts.len()
            )));
        }
        let e = EmpiricalDistribution::from_counts(wire.counts)?;
        if e.m() != wire.m {
            return Err(Error::InvalidProbabilities(format!(
                "m = {} but counts sum to {}",
                wire.m,
                e.m()
            )));
        }
        Ok(e)
    }
}

impl From<EmpiricalDistribution> for EmpiricalWire {
    fn from(e: EmpiricalDistribution) -> Self {
        EmpiricalWire {
            n: e.n(),
            m: e.m(),
            counts: e.counts,
        }
    }
}

impl EmpiricalDistribution {
    pub fn from_counts(counts: Vec<u64>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::EmptyDomain);
        }
        let mut acc = 0u64;
        let prefix: Vec<u64> = counts
            .iter()
            .map(|&c| {
                acc += c;
                acc
            })
            .collect();
        if acc == 0 {
            return Err(Error::InvalidProbabilities("no samples".into()));
        }
        Ok(EmpiricalDistribution { counts, prefix })
    }

    /// Tallies 1-based sample points.
    pub fn from_samples(n: usize, samples: &[usize]) -> Result<Self> {
        let mut counts = alloc::vec![0u64; n];
        for &s in samples {
            if s == 0 || s > n {
                return Err(Error::InvalidInterval { a: s, b: s, n });
            }
            counts[s - 1] += 1;
        }
        EmpiricalDistribution::from_counts(counts)
    }

    pub fn n(&self) -> usize {
        self.counts.len()
    }

    /// Number of samples.
    pub fn m(&self) -> u64 {
        self.prefix[self.prefix.len() - 1]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Number of samples that fell in `interval`.
    pub fn count_in(&self, interval: Interval) -> u64 {
        let below = if interval.start() > 1 {
            self.prefix[interval.start() - 2]
        } else {
            0
        };
        self.prefix[interval.end() - 1] - below
    }

    pub fn to_distribution(&self) -> Distribution {
        let m = self.m() as f64;
        let probs = self.counts.iter().map(|&c| c as f64 / m).collect();
        Distribution::new(probs).expect("counts normalize to a distribution")
    }
}

impl Pmf for EmpiricalDistribution {
    fn domain_size(&self) -> usize {
        self.counts.len()
    }

    fn prob(&self, i: usize) -> f64 {
        self.counts[i - 1] as f64 / self.m() as f64
    }

    fn mass(&self, interval: Interval) -> f64 {
        self.count_in(interval) as f64 / self.m() as f64
    }
}
