use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::constants::Constants;
use crate::error::{Error, Result};
use crate::partition::{Interval, IntervalPartition};

/// Which end of the domain a monotone distribution is large at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    NonIncreasing,
    NonDecreasing,
}

/// `C₄ ln(n) / ε`.
pub fn birge_interval_bound(n: usize, epsilon: f64, constants: &Constants) -> f64 {
    constants.c4 * libm::log(n as f64) / epsilon
}

/// Oblivious partition for monotone distributions: interval lengths
/// `⌊(1+ε)^j⌋`, `j = 0, 1, …`, growing away from the large end and
/// truncated at `n`.
pub fn birge_partition(
    n: usize,
    epsilon: f64,
    orientation: Orientation,
) -> Result<IntervalPartition> {
    if n == 0 {
        return Err(Error::EmptyDomain);
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::ParameterOutOfRange {
            name: "epsilon",
            value: epsilon,
            range: "(0, ∞)",
        });
    }
    let mut lengths = Vec::new();
    let mut covered = 0usize;
    let mut j = 0i32;
    while covered < n {
        let len = (libm::floor(libm::pow(1.0 + epsilon, j as f64)) as usize).max(1);
        let len = len.min(n - covered);
        lengths.push(len);
        covered += len;
        j += 1;
    }
    if orientation == Orientation::NonDecreasing {
        lengths.reverse();
    }
    let mut start = 1;
    let intervals = lengths
        .into_iter()
        .map(|len| {
            let iv = Interval::raw(start, start + len - 1);
            start += len;
            iv
        })
        .collect();
    IntervalPartition::new(n, intervals)
}
