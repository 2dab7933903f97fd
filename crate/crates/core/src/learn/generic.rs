use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::constants::Constants;
use crate::decompose::construct_from_empirical;
use crate::distribution::{EmpiricalDistribution, Pmf};
use crate::error::{check_unit_open, Error, Result};
use crate::flat::{flatten, FlatHypothesis};
use crate::partition::IntervalPartition;
use crate::sampling::{sample, SampleSource};
use crate::seed;

use super::select::{scheffe_winner, selection_sample_budget};
use super::{LearnReport, StageReport};

/// Largest sample the generic learner will split exhaustively.
pub const MAX_GENERIC_SAMPLES: u64 = 16;
/// Largest number of mixture components the generic learner supports.
pub const MAX_GENERIC_COMPONENTS: usize = 2;
/// Largest candidate slate the quadratic tournament will run on.
pub const MAX_GENERIC_CANDIDATES: usize = 20_000;

/// A single-distribution learner fed with an already drawn subsample.
pub trait BaseLearner {
    fn learn(&self, sample: &EmpiricalDistribution) -> Result<FlatHypothesis>;
}

/// The empirical distribution itself, as a flattening over singletons.
#[derive(Debug, Clone, Copy, Default)]
pub struct EmpiricalLearner;

impl BaseLearner for EmpiricalLearner {
    fn learn(&self, sample: &EmpiricalDistribution) -> Result<FlatHypothesis> {
        flatten(sample, &IntervalPartition::singletons(sample.n())?)
    }
}

/// Flattening of the subsample over a fixed partition.
#[derive(Debug, Clone)]
pub struct KnownPartitionLearner {
    pub partition: IntervalPartition,
}

impl BaseLearner for KnownPartitionLearner {
    fn learn(&self, sample: &EmpiricalDistribution) -> Result<FlatHypothesis> {
        flatten(sample, &self.partition)
    }
}

/// Builds a partition at `τ = ε/(4t)` from the subsample and flattens the
/// same subsample over it.
#[derive(Debug, Clone, Copy)]
pub struct UnknownDecompositionLearner {
    pub t: usize,
    pub epsilon: f64,
}

impl BaseLearner for UnknownDecompositionLearner {
    fn learn(&self, sample: &EmpiricalDistribution) -> Result<FlatHypothesis> {
        if self.t == 0 {
            return Err(Error::ParameterOutOfRange {
                name: "t",
                value: 0.0,
                range: "[1, ∞)",
            });
        }
        check_unit_open("epsilon", self.epsilon)?;
        let partition = construct_from_empirical(sample, self.epsilon / (4.0 * self.t as f64))?;
        flatten(sample, &partition)
    }
}

/// Knobs of the generic mixture learner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenericConfig {
    pub k: usize,
    /// Size `M` of the sample that gets split among the components.
    pub sample_size: u64,
    /// Smallest admissible part of a split.
    pub min_part: u64,
    /// Tournament sample size; the closed-form budget when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selection_samples: Option<u64>,
}

impl GenericConfig {
    fn validate(&self) -> Result<()> {
        if self.k == 0 || self.k > MAX_GENERIC_COMPONENTS || self.sample_size > MAX_GENERIC_SAMPLES
        {
            return Err(Error::ScaleLimit(format!(
                "generic learner needs 1 <= k <= {MAX_GENERIC_COMPONENTS} and M <= {MAX_GENERIC_SAMPLES}, got k = {}, M = {}",
                self.k, self.sample_size
            )));
        }
        if self.min_part == 0 || self.sample_size < self.min_part * self.k as u64 {
            return Err(Error::ParameterOutOfRange {
                name: "min_part",
                value: self.min_part as f64,
                range: "[1, M/k]",
            });
        }
        if self.selection_samples == Some(0) {
            return Err(Error::ParameterOutOfRange {
                name: "selection_samples",
                value: 0.0,
                range: "[1, ∞)",
            });
        }
        Ok(())
    }
}

/// All weight vectors of length `k` whose entries are multiples of
/// `1/L` with `L = ⌈20k/ε⌉`, so the step is at most `ε/(20k)`.
pub fn weight_grid(k: usize, epsilon: f64) -> Result<Vec<Vec<f64>>> {
    check_unit_open("epsilon", epsilon)?;
    if k == 0 || k > MAX_GENERIC_COMPONENTS {
        return Err(Error::ScaleLimit(format!(
            "weight grid needs 1 <= k <= {MAX_GENERIC_COMPONENTS}, got {k}"
        )));
    }
    // The slack keeps 20k/ε from rounding up past an exact integer.
    let steps = libm::ceil(20.0 * k as f64 / epsilon - 1e-9) as usize;
    let mut out = Vec::new();
    let mut current = vec![0usize; k];
    compositions(steps, 0, &mut current, &mut |c| {
        out.push(c.iter().map(|&x| x as f64 / steps as f64).collect())
    });
    Ok(out)
}

fn compositions(left: usize, at: usize, current: &mut [usize], emit: &mut impl FnMut(&[usize])) {
    if at + 1 == current.len() {
        current[at] = left;
        emit(current);
        return;
    }
    for x in 0..=left {
        current[at] = x;
        compositions(left - x, at + 1, current, emit);
    }
}

/// `Σ wᵢ hᵢ` as a flat hypothesis over the common refinement of the
/// inputs' partitions.
pub fn mix_hypotheses(hypotheses: &[FlatHypothesis], weights: &[f64]) -> Result<FlatHypothesis> {
    let first = hypotheses.first().ok_or(Error::NoCandidates)?;
    if weights.len() != hypotheses.len() {
        return Err(Error::InvalidProbabilities(format!(
            "{} weights for {} hypotheses",
            weights.len(),
            hypotheses.len()
        )));
    }
    let mut refined = first.partition().clone();
    for h in &hypotheses[1..] {
        refined = refined.common_refinement(h.partition())?;
    }
    let masses = refined
        .iter()
        .map(|&iv| {
            hypotheses
                .iter()
                .zip(weights)
                .map(|(h, &w)| w * h.mass(iv))
                .sum()
        })
        .collect();
    FlatHypothesis::new(refined, masses)
}

/// The generic mixture learner: draws `M` samples, tries every split of
/// them into `k` parts of at least `min_part` samples, runs `base` on each
/// part, mixes the results with every grid weight vector and picks one
/// candidate by a Scheffé tournament on fresh samples.
///
/// Exhaustive and quadratic in the slate size, so only toy sizes are
/// accepted.
pub fn generic_mixture_learn<S, B>(
    source: &S,
    base: &B,
    config: &GenericConfig,
    epsilon: f64,
    delta: f64,
    constants: &Constants,
    seed: u64,
) -> Result<LearnReport>
where
    S: SampleSource + ?Sized,
    B: BaseLearner + ?Sized,
{
    config.validate()?;
    check_unit_open("delta", delta)?;
    constants.validate()?;
    let grid = weight_grid(config.k, epsilon)?;

    let draw_seed = seed::derive(seed, 1);
    let drawn = sample(source, config.sample_size, draw_seed)?;
    let splits = splits(drawn.counts(), config.k, config.min_part);

    let mut seen = BTreeSet::new();
    let mut candidates = Vec::new();
    for split in &splits {
        let parts = split
            .iter()
            .map(|counts| base.learn(&EmpiricalDistribution::from_counts(counts.clone())?))
            .collect::<Result<Vec<_>>>()?;
        for w in &grid {
            let h = mix_hypotheses(&parts, w)?;
            let key: Vec<u64> = h.dense().iter().map(|x| x.to_bits()).collect();
            if seen.insert(key) {
                if candidates.len() == MAX_GENERIC_CANDIDATES {
                    return Err(Error::ScaleLimit(format!(
                        "more than {MAX_GENERIC_CANDIDATES} distinct candidates"
                    )));
                }
                candidates.push(h);
            }
        }
    }
    if candidates.is_empty() {
        return Err(Error::NoCandidates);
    }

    let select_seed = seed::derive(seed, 2);
    let m_select = match candidates.len() {
        1 => 0,
        n => config
            .selection_samples
            .unwrap_or_else(|| selection_sample_budget(n, epsilon, delta, constants)),
    };
    let winner = if m_select == 0 {
        0
    } else {
        scheffe_winner(&candidates, &sample(source, m_select, select_seed)?)?
    };

    let stages = vec![
        StageReport {
            name: "generic-split".to_string(),
            epsilon,
            delta,
            tau: None,
            samples: config.sample_size,
            seed: draw_seed,
            size: splits.len(),
        },
        StageReport {
            name: "scheffe-selection".to_string(),
            epsilon,
            delta,
            tau: None,
            samples: m_select,
            seed: select_seed,
            size: candidates.len(),
        },
    ];
    let hypothesis = candidates.swap_remove(winner);
    Ok(LearnReport::new(hypothesis, seed, stages))
}

/// Distinct splits of a tally into `k` labelled tallies, each holding at
/// least `min_part` samples.
fn splits(counts: &[u64], k: usize, min_part: u64) -> Vec<Vec<Vec<u64>>> {
    let total: u64 = counts.iter().sum();
    if k == 1 {
        return if total >= min_part {
            vec![vec![counts.to_vec()]]
        } else {
            Vec::new()
        };
    }
    // k = 2: the first part takes a[x] ∈ [0, counts[x]] of each point.
    let support: Vec<usize> = (0..counts.len()).filter(|&x| counts[x] > 0).collect();
    let mut first = vec![0u64; counts.len()];
    let mut out = Vec::new();
    loop {
        let size: u64 = first.iter().sum();
        if size >= min_part && total - size >= min_part {
            let second = counts.iter().zip(&first).map(|(c, a)| c - a).collect();
            out.push(vec![first.clone(), second]);
        }
        // Mixed-radix increment over the support.
        let mut carried = true;
        for &x in &support {
            if first[x] < counts[x] {
                first[x] += 1;
                carried = false;
                break;
            }
            first[x] = 0;
        }
        if carried {
            return out;
        }
    }
}
