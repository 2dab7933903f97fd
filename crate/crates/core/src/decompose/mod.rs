//! Partition construction: the greedy right-to-left scan, the sample-based
//! decomposer and the structural decomposers for log-concave, MHR and
//! monotone distributions.

mod birge;
mod construct;
mod mhr;

pub use birge::{birge_interval_bound, birge_partition, Orientation};
pub use construct::{
    construct_decomposition, construct_from_empirical, construct_sample_budget,
    decompose_log_concave, log_concave_tau, right_interval, Decomposition,
};
pub use mhr::{decompose_mhr, mhr_interval_bound, MhrDecomposition};

use serde::{Deserialize, Serialize};

use crate::distribution::Pmf;
use crate::error::{check_unit_open, Error, Result};
use crate::flat::flatten;
use crate::partition::IntervalPartition;

/// Accuracy, confidence and mass threshold for the sample-based decomposer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecomposeParams {
    epsilon: f64,
    delta: f64,
    tau: f64,
    t_hint: usize,
}

impl DecomposeParams {
    pub fn new(epsilon: f64, delta: f64, tau: f64) -> Result<Self> {
        check_unit_open("epsilon", epsilon)?;
        check_unit_open("delta", delta)?;
        if !(tau > 0.0 && tau <= 1.0) {
            return Err(Error::ParameterOutOfRange {
                name: "tau",
                value: tau,
                range: "(0, 1]",
            });
        }
        Ok(DecomposeParams {
            epsilon,
            delta,
            tau,
            t_hint: 1,
        })
    }

    /// Threshold `τ = ε/(4t)` for a target known to be `(ε/4, t)`-flat.
    pub fn for_flatness(epsilon: f64, delta: f64, t: usize) -> Result<Self> {
        if t == 0 {
            return Err(Error::ParameterOutOfRange {
                name: "t",
                value: 0.0,
                range: "[1, ∞)",
            });
        }
        let mut params = DecomposeParams::new(epsilon, delta, epsilon / (4.0 * t as f64))?;
        params.t_hint = t;
        Ok(params)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn t_hint(&self) -> usize {
        self.t_hint
    }

    /// Upper bound `⌈2/τ⌉` on the number of intervals the greedy scan emits.
    pub fn max_intervals(&self) -> usize {
        libm::ceil(2.0 / self.tau) as usize
    }
}

/// `d_TV(p, p^flat(P))`.
pub fn flattening_error<P: Pmf + ?Sized>(p: &P, partition: &IntervalPartition) -> Result<f64> {
    let flat = flatten(p, partition)?;
    crate::tv_distance(p, &flat)
}
