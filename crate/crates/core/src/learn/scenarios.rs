use alloc::string::ToString;
use alloc::vec;

use crate::constants::{ceil_u64, Constants};
use crate::decompose::{construct_decomposition, DecomposeParams};
use crate::error::{check_unit_open, Error, Result};
use crate::flat::flatten;
use crate::partition::IntervalPartition;
use crate::sampling::{sample, SampleSource};
use crate::seed;

use super::{LearnReport, StageReport};

/// `m = ⌈C₁ (t + ln(2/δ)) / ε²⌉` for a partition of `t` intervals.
pub fn known_sample_budget(t: usize, epsilon: f64, delta: f64, constants: &Constants) -> u64 {
    ceil_u64(constants.c1 * (t as f64 + libm::log(2.0 / delta)) / (epsilon * epsilon))
}

/// Flattens the empirical distribution of `known_sample_budget` samples
/// over the given partition. If the partition is `(p, ε, t)`-flat the
/// result is within `2ε` of `p` with probability `1 − δ`.
pub fn learn_known_decomposition<S: SampleSource + ?Sized>(
    source: &S,
    partition: &IntervalPartition,
    epsilon: f64,
    delta: f64,
    constants: &Constants,
    seed: u64,
) -> Result<LearnReport> {
    check_unit_open("epsilon", epsilon)?;
    check_unit_open("delta", delta)?;
    constants.validate()?;
    if partition.n() != source.domain_size() {
        return Err(Error::DomainMismatch {
            left: source.domain_size(),
            right: partition.n(),
        });
    }
    let m = known_sample_budget(partition.len(), epsilon, delta, constants);
    let empirical = sample(source, m, seed)?;
    let hypothesis = flatten(&empirical, partition)?;
    let stage = StageReport {
        name: "learn-known".to_string(),
        epsilon,
        delta,
        tau: None,
        samples: m,
        seed,
        size: partition.len(),
    };
    Ok(LearnReport::new(hypothesis, seed, vec![stage]))
}

/// Builds a partition from samples at `τ = ε/(4t)` with confidence `δ/2`,
/// then learns over it with confidence `δ/2`.
pub fn learn_unknown_decomposition<S: SampleSource + ?Sized>(
    source: &S,
    t: usize,
    epsilon: f64,
    delta: f64,
    constants: &Constants,
    seed: u64,
) -> Result<LearnReport> {
    check_unit_open("delta", delta)?;
    let params = DecomposeParams::for_flatness(epsilon, delta / 2.0, t)?;
    two_stage(source, "construct-decomposition", &params, constants, seed)
}

/// A `k`-mixture of `(ε/8, t)`-flat distributions is `(ε, kt)`-flat enough
/// for [`learn_unknown_decomposition`] with parameter `k·t`.
pub fn learn_mixture<S: SampleSource + ?Sized>(
    source: &S,
    k: usize,
    t: usize,
    epsilon: f64,
    delta: f64,
    constants: &Constants,
    seed: u64,
) -> Result<LearnReport> {
    if k == 0 {
        return Err(Error::ParameterOutOfRange {
            name: "k",
            value: 0.0,
            range: "[1, ∞)",
        });
    }
    let kt = k
        .checked_mul(t)
        .ok_or_else(|| Error::ScaleLimit("k·t overflows".into()))?;
    learn_unknown_decomposition(source, kt, epsilon, delta, constants, seed)
}

/// Stage 1 decomposes with `params` (its δ is already halved); stage 2
/// learns over the result at `(ε, params.delta)`.
pub(crate) fn two_stage<S: SampleSource + ?Sized>(
    source: &S,
    name: &str,
    params: &DecomposeParams,
    constants: &Constants,
    seed: u64,
) -> Result<LearnReport> {
    let first_seed = seed::derive(seed, 1);
    let dec = construct_decomposition(source, params, constants, first_seed)?;
    let second_seed = seed::derive(seed, 2);
    let known = learn_known_decomposition(
        source,
        &dec.partition,
        params.epsilon(),
        params.delta(),
        constants,
        second_seed,
    )?;
    let first = StageReport {
        name: name.to_string(),
        epsilon: params.epsilon(),
        delta: params.delta(),
        tau: Some(dec.tau),
        samples: dec.samples_used,
        seed: first_seed,
        size: dec.partition.len(),
    };
    let mut stages = vec![first];
    stages.extend(known.stages);
    Ok(LearnReport::new(known.hypothesis, seed, stages))
}
