//! Learners. Every learner draws its own samples from a [`SampleSource`]
//! according to a closed-form budget and returns a [`LearnReport`].
//!
//! Budgets use natural logarithms and round up. Stage `i` of a multi-stage
//! learner draws with seed `seed::derive(seed, i)`.
//!
//! [`SampleSource`]: crate::SampleSource

mod classes;
mod generic;
mod scenarios;
mod select;

pub use classes::{
    learn_log_concave, learn_log_concave_mixture, learn_mhr_mixture, learn_tmodal_mixture,
    log_concave_mixture_flatness, mhr_flatness, tmodal_flatness,
};
pub use generic::{
    generic_mixture_learn, mix_hypotheses, weight_grid, BaseLearner, EmpiricalLearner,
    GenericConfig, KnownPartitionLearner, UnknownDecompositionLearner, MAX_GENERIC_COMPONENTS,
    MAX_GENERIC_SAMPLES,
};
pub use scenarios::{
    known_sample_budget, learn_known_decomposition, learn_mixture, learn_unknown_decomposition,
};
pub use select::{scheffe_winner, select_hypothesis, selection_sample_budget};

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::flat::FlatHypothesis;

/// A learner's output hypothesis plus what it took to produce it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LearnReport {
    pub hypothesis: FlatHypothesis,
    pub samples_used: u64,
    pub partition_size: usize,
    /// Left at zero by the learners; callers that time runs fill it in.
    pub wall_time_ns: u64,
    pub seed: u64,
    pub stages: Vec<StageReport>,
}

/// Diagnostics of one sampling stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageReport {
    pub name: String,
    pub epsilon: f64,
    pub delta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    pub samples: u64,
    pub seed: u64,
    /// Intervals (or candidates, for selection stages) the stage produced.
    pub size: usize,
}

impl LearnReport {
    fn new(hypothesis: FlatHypothesis, seed: u64, stages: Vec<StageReport>) -> Self {
        LearnReport {
            partition_size: hypothesis.len(),
            samples_used: stages.iter().map(|s| s.samples).sum(),
            hypothesis,
            wall_time_ns: 0,
            seed,
            stages,
        }
    }
}
