use alloc::vec::Vec;

use crate::constants::{ceil_u64, Constants};
use crate::distribution::Pmf;
use crate::error::{check_unit_open, Error, Result};
use crate::partition::{Interval, IntervalPartition};
use crate::sampling::{sample, SampleSource};

use super::DecomposeParams;

/// Longest interval of `within` that ends at `within.end()` and has
/// `q`-mass at most `tau`; the singleton `[b, b]` when `q(b) > tau`.
pub fn right_interval<Q: Pmf + ?Sized>(q: &Q, within: Interval, tau: f64) -> Result<Interval> {
    if within.end() > q.domain_size() {
        return Err(Error::InvalidInterval {
            a: within.start(),
            b: within.end(),
            n: q.domain_size(),
        });
    }
    if tau.is_nan() || tau <= 0.0 {
        return Err(Error::ParameterOutOfRange {
            name: "tau",
            value: tau,
            range: "(0, ∞)",
        });
    }
    let (a, b) = (within.start(), within.end());
    if q.prob(b) > tau {
        return Ok(Interval::raw(b, b));
    }
    // q([i, b]) is non-increasing in i; find the first i where it drops to <= tau.
    let (mut lo, mut hi) = (a, b);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if q.mass(Interval::raw(mid, b)) > tau {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    Ok(Interval::raw(lo, b))
}

/// The greedy scan: peel `right_interval` pieces off `[1, n]` from the
/// right until nothing is left.
pub fn construct_from_empirical<Q: Pmf + ?Sized>(q: &Q, tau: f64) -> Result<IntervalPartition> {
    let n = q.domain_size();
    if n == 0 {
        return Err(Error::EmptyDomain);
    }
    let mut pieces = Vec::new();
    let mut end = n;
    while end >= 1 {
        let piece = right_interval(q, Interval::raw(1, end), tau)?;
        pieces.push(piece);
        end = piece.start() - 1;
    }
    pieces.reverse();
    IntervalPartition::new(n, pieces)
}

/// `m = ⌈C₁ (1/τ + ln(2/δ)) / ε²⌉`.
pub fn construct_sample_budget(params: &DecomposeParams, constants: &Constants) -> u64 {
    let DecomposeParams {
        epsilon,
        delta,
        tau,
        ..
    } = *params;
    ceil_u64(constants.c1 * (1.0 / tau + libm::log(2.0 / delta)) / (epsilon * epsilon))
}

/// A partition built from samples, with the bookkeeping that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub partition: IntervalPartition,
    pub tau: f64,
    pub samples_used: u64,
}

/// Draws `construct_sample_budget` samples and runs the greedy scan on the
/// empirical distribution.
pub fn construct_decomposition<S: SampleSource + ?Sized>(
    source: &S,
    params: &DecomposeParams,
    constants: &Constants,
    seed: u64,
) -> Result<Decomposition> {
    constants.validate()?;
    let m = construct_sample_budget(params, constants);
    let empirical = sample(source, m, seed)?;
    let partition = construct_from_empirical(&empirical, params.tau())?;
    Ok(Decomposition {
        partition,
        tau: params.tau(),
        samples_used: m,
    })
}

/// `τ = ε / (C₂ ln(2/ε))`.
pub fn log_concave_tau(epsilon: f64, constants: &Constants) -> f64 {
    epsilon / (constants.c2 * libm::log(2.0 / epsilon))
}

/// Sample-based decomposition for log-concave targets. Log-concavity is not
/// checked; the flatness guarantee only holds under it.
pub fn decompose_log_concave<S: SampleSource + ?Sized>(
    source: &S,
    epsilon: f64,
    delta: f64,
    constants: &Constants,
    seed: u64,
) -> Result<Decomposition> {
    check_unit_open("epsilon", epsilon)?;
    constants.validate()?;
    let params = DecomposeParams::new(epsilon, delta, log_concave_tau(epsilon, constants))?;
    construct_decomposition(source, &params, constants, seed)
}
