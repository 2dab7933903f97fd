use alloc::borrow::Cow;
use alloc::format;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::distribution::{Distribution, Pmf, NORMALIZATION_TOLERANCE};
use crate::error::{Error, Result};
use crate::partition::Interval;

/// A `k`-mixture `Σ μ_i p_i` of distributions over a common `[n]`.
///
/// A draw picks component `i` with probability `μ_i`, then draws from `p_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MixtureWire", into = "MixtureWire")]
pub struct MixtureSpec {
    components: Vec<Distribution>,
    weights: Vec<f64>,
    combined: Distribution,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MixtureWire {
    components: Vec<Distribution>,
    weights: Vec<f64>,
}

impl TryFrom<MixtureWire> for MixtureSpec {
    type Error = Error;

    fn try_from(w: MixtureWire) -> Result<Self> {
        MixtureSpec::new(w.components, w.weights)
    }
}

impl From<MixtureSpec> for MixtureWire {
    fn from(m: MixtureSpec) -> Self {
        MixtureWire {
            components: m.components,
            weights: m.weights,
        }
    }
}

impl MixtureSpec {
    pub fn new(components: Vec<Distribution>, weights: Vec<f64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidProbabilities(
                "a mixture needs a component".into(),
            ));
        }
        if components.len() != weights.len() {
            return Err(Error::InvalidProbabilities(format!(
                "{} components but {} weights",
                components.len(),
                weights.len()
            )));
        }
        let n = components[0].n();
        if let Some(c) = components.iter().find(|c| c.n() != n) {
            return Err(Error::DomainMismatch {
                left: n,
                right: c.n(),
            });
        }
        if weights.iter().any(|&w| !w.is_finite() || w < 0.0) {
            return Err(Error::InvalidProbabilities(
                "mixing weights must be finite and non-negative".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::InvalidProbabilities(format!(
                "mixing weights sum to {total}"
            )));
        }
        let mut probs = alloc::vec![0.0; n];
        for (c, &w) in components.iter().zip(&weights) {
            for (acc, &x) in probs.iter_mut().zip(c.probs()) {
                *acc += w * x;
            }
        }
        let combined = Distribution::new(probs)?;
        Ok(MixtureSpec {
            components,
            weights,
            combined,
        })
    }

    pub fn n(&self) -> usize {
        self.combined.n()
    }

    /// Number of components.
    pub fn k(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Distribution] {
        &self.components
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// The mixture as a single explicit distribution.
    pub fn to_distribution(&self) -> &Distribution {
        &self.combined
    }
}

impl Pmf for MixtureSpec {
    fn domain_size(&self) -> usize {
        self.combined.n()
    }

    fn prob(&self, i: usize) -> f64 {
        self.combined.prob(i)
    }

    fn mass(&self, interval: Interval) -> f64 {
        self.combined.mass(interval)
    }

    fn dense(&self) -> Cow<'_, [f64]> {
        self.combined.dense()
    }
}
