use alloc::string::ToString;
use alloc::vec;

use crate::constants::{ceil_u64, Constants};
use crate::decompose::{decompose_log_concave, log_concave_tau};
use crate::error::{check_unit_open, Error, Result};
use crate::sampling::SampleSource;
use crate::seed;

use super::scenarios::{learn_known_decomposition, learn_mixture};
use super::{LearnReport, StageReport};

/// Decomposes at `τ = ε/(C₂ ln(2/ε))` with confidence `δ/2`, then learns
/// over the result with confidence `δ/2`.
pub fn learn_log_concave<S: SampleSource + ?Sized>(
    source: &S,
    epsilon: f64,
    delta: f64,
    constants: &Constants,
    seed: u64,
) -> Result<LearnReport> {
    check_unit_open("delta", delta)?;
    let first_seed = seed::derive(seed, 1);
    let dec = decompose_log_concave(source, epsilon, delta / 2.0, constants, first_seed)?;
    let known = learn_known_decomposition(
        source,
        &dec.partition,
        epsilon,
        delta / 2.0,
        constants,
        seed::derive(seed, 2),
    )?;
    let mut stages = vec![StageReport {
        name: "decompose-log-concave".to_string(),
        epsilon,
        delta: delta / 2.0,
        tau: Some(log_concave_tau(epsilon, constants)),
        samples: dec.samples_used,
        seed: first_seed,
        size: dec.partition.len(),
    }];
    stages.extend(known.stages);
    Ok(LearnReport::new(known.hypothesis, seed, stages))
}

/// `t = ⌈8 C₂ ln(2/ε) / ε⌉` per log-concave component.
pub fn log_concave_mixture_flatness(epsilon: f64, constants: &Constants) -> Result<usize> {
    check_unit_open("epsilon", epsilon)?;
    to_usize(8.0 * constants.c2 * libm::log(2.0 / epsilon) / epsilon)
}

/// `t = ⌈C₃ ln(n/ε) / ε⌉` per MHR component.
pub fn mhr_flatness(n: usize, epsilon: f64, constants: &Constants) -> Result<usize> {
    check_unit_open("epsilon", epsilon)?;
    to_usize(constants.c3 * libm::log(n as f64 / epsilon) / epsilon)
}

/// `t = modes · ⌈C₄ ln(n) / ε⌉` per component with at most `modes` modes.
pub fn tmodal_flatness(
    n: usize,
    modes: usize,
    epsilon: f64,
    constants: &Constants,
) -> Result<usize> {
    check_unit_open("epsilon", epsilon)?;
    if modes == 0 {
        return Err(Error::ParameterOutOfRange {
            name: "modes",
            value: 0.0,
            range: "[1, ∞)",
        });
    }
    // n = 1 would give zero intervals per mode.
    let per_mode = to_usize(constants.c4 * libm::log(n as f64) / epsilon)?.max(1);
    per_mode
        .checked_mul(modes)
        .ok_or_else(|| Error::ScaleLimit("flatness parameter overflows".into()))
}

pub fn learn_log_concave_mixture<S: SampleSource + ?Sized>(
    source: &S,
    k: usize,
    epsilon: f64,
    delta: f64,
    constants: &Constants,
    seed: u64,
) -> Result<LearnReport> {
    constants.validate()?;
    let t = log_concave_mixture_flatness(epsilon, constants)?;
    learn_mixture(source, k, t, epsilon, delta, constants, seed)
}

pub fn learn_mhr_mixture<S: SampleSource + ?Sized>(
    source: &S,
    k: usize,
    epsilon: f64,
    delta: f64,
    constants: &Constants,
    seed: u64,
) -> Result<LearnReport> {
    constants.validate()?;
    let t = mhr_flatness(source.domain_size(), epsilon, constants)?;
    learn_mixture(source, k, t, epsilon, delta, constants, seed)
}

pub fn learn_tmodal_mixture<S: SampleSource + ?Sized>(
    source: &S,
    k: usize,
    modes: usize,
    epsilon: f64,
    delta: f64,
    constants: &Constants,
    seed: u64,
) -> Result<LearnReport> {
    constants.validate()?;
    let t = tmodal_flatness(source.domain_size(), modes, epsilon, constants)?;
    learn_mixture(source, k, t, epsilon, delta, constants, seed)
}

fn to_usize(x: f64) -> Result<usize> {
    let t = ceil_u64(x);
    usize::try_from(t)
        .ok()
        .filter(|&t| t < usize::MAX / 64)
        .ok_or_else(|| Error::ScaleLimit("flatness parameter too large".into()))
}
