//! Seeded experiment runner.
//!
//! Trial `i` runs the configured learner with seed
//! `flathist_core::seed::derive(master_seed, i)` and is scored by exact TV
//! against the target. Trials are independent, so results do not depend on
//! the thread count or on scheduling.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use flathist_core::decompose::{birge_partition, decompose_mhr, Orientation};
use flathist_core::families::{generate, FamilySpec};
use flathist_core::learn::{
    generic_mixture_learn, learn_known_decomposition, learn_log_concave, learn_log_concave_mixture,
    learn_mhr_mixture, learn_mixture, learn_tmodal_mixture, learn_unknown_decomposition,
    EmpiricalLearner, GenericConfig, LearnReport, UnknownDecompositionLearner,
};
use flathist_core::{seed, tv_distance, Constants, IntervalPartition};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{self, FamilyMixture};
use crate::target::Target;

pub const SCHEMA_VERSION: u32 = 1;

/// CSV header of [`write_csv`].
pub const CSV_HEADER: &str = "trial,seed,tv,samples,bins,ns";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub target: TargetSpec,
    pub learner: LearnerSpec,
    pub epsilon: f64,
    pub delta: f64,
    pub trials: u64,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default)]
    pub constants: Constants,
    /// CSV destination.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Worker threads; all cores when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    /// Measure wall time per trial. Off by default so CSVs are reproducible
    /// byte for byte.
    #[serde(default)]
    pub record_timing: bool,
}

/// Where the target comes from. Relative file paths are resolved against
/// the config file's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum TargetSpec {
    Family(FamilySpec),
    Mixture(FamilyMixture),
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum LearnerSpec {
    Known {
        partition: PartitionSpec,
    },
    Unknown {
        t: usize,
    },
    Mixture {
        k: usize,
        t: usize,
    },
    LogConcave {
        #[serde(default = "one")]
        k: usize,
    },
    Mhr {
        #[serde(default = "one")]
        k: usize,
    },
    Tmodal {
        #[serde(default = "one")]
        k: usize,
        #[serde(default = "one")]
        modes: usize,
    },
    GenericToy {
        k: usize,
        sample_size: u64,
        #[serde(default = "one_u64")]
        min_part: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        selection_samples: Option<u64>,
        #[serde(default)]
        base: BaseSpec,
    },
}

fn one() -> usize {
    1
}

fn one_u64() -> u64 {
    1
}

/// The fixed partition of the `known` learner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "from", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PartitionSpec {
    /// `decompose_mhr` of the target at the run's ε.
    Mhr,
    /// Oblivious monotone partition at the run's ε.
    Birge {
        orientation: Orientation,
    },
    Singletons,
    Whole,
    File {
        path: PathBuf,
    },
    Inline {
        partition: IntervalPartition,
    },
}

/// Base learner of the generic learner.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BaseSpec {
    #[default]
    Empirical,
    Unknown {
        t: usize,
    },
}

impl TargetSpec {
    pub fn resolve(&self, base_dir: &Path) -> Result<Target> {
        match self {
            TargetSpec::Family(spec) => Ok(Target::Single(generate(spec)?)),
            TargetSpec::Mixture(m) => Ok(Target::Mixture(m.build()?)),
            TargetSpec::File(path) => io::read_target(&base_dir.join(path)),
        }
    }
}

/// A learner with its fixed inputs resolved, ready to run on any seed.
#[derive(Debug, Clone)]
pub struct Learner {
    spec: LearnerSpec,
    partition: Option<IntervalPartition>,
}

impl Learner {
    /// Resolves the `known` learner's partition against `target`.
    pub fn prepare(
        spec: &LearnerSpec,
        target: &Target,
        epsilon: f64,
        base_dir: &Path,
    ) -> Result<Self> {
        let partition = match spec {
            LearnerSpec::Known { partition } => Some(match partition {
                PartitionSpec::Mhr => decompose_mhr(target.exact(), epsilon)?.partition,
                PartitionSpec::Birge { orientation } => {
                    birge_partition(target.n(), epsilon, *orientation)?
                }
                PartitionSpec::Singletons => IntervalPartition::singletons(target.n())?,
                PartitionSpec::Whole => IntervalPartition::whole(target.n())?,
                PartitionSpec::File { path } => io::read_partition(&base_dir.join(path))?,
                PartitionSpec::Inline { partition } => partition.clone(),
            }),
            _ => None,
        };
        Ok(Learner {
            spec: spec.clone(),
            partition,
        })
    }

    pub fn learn(
        &self,
        target: &Target,
        epsilon: f64,
        delta: f64,
        constants: &Constants,
        seed: u64,
    ) -> Result<LearnReport> {
        let (e, d, c) = (epsilon, delta, constants);
        let report = match self.spec {
            LearnerSpec::Known { .. } => {
                let partition = self.partition.as_ref().expect("resolved in prepare");
                learn_known_decomposition(target, partition, e, d, c, seed)
            }
            LearnerSpec::Unknown { t } => learn_unknown_decomposition(target, t, e, d, c, seed),
            LearnerSpec::Mixture { k, t } => learn_mixture(target, k, t, e, d, c, seed),
            LearnerSpec::LogConcave { k: 1 } => learn_log_concave(target, e, d, c, seed),
            LearnerSpec::LogConcave { k } => learn_log_concave_mixture(target, k, e, d, c, seed),
            LearnerSpec::Mhr { k } => learn_mhr_mixture(target, k, e, d, c, seed),
            LearnerSpec::Tmodal { k, modes } => {
                learn_tmodal_mixture(target, k, modes, e, d, c, seed)
            }
            LearnerSpec::GenericToy {
                k,
                sample_size,
                min_part,
                selection_samples,
                base,
            } => {
                let config = GenericConfig {
                    k,
                    sample_size,
                    min_part,
                    selection_samples,
                };
                match base {
                    BaseSpec::Empirical => {
                        generic_mixture_learn(target, &EmpiricalLearner, &config, e, d, c, seed)
                    }
                    BaseSpec::Unknown { t } => {
                        let base = UnknownDecompositionLearner { t, epsilon };
                        generic_mixture_learn(target, &base, &config, e, d, c, seed)
                    }
                }
            }
        };
        Ok(report?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub trial: u64,
    pub seed: u64,
    /// Exact TV between target and hypothesis.
    pub tv: f64,
    pub samples: u64,
    pub bins: usize,
    /// Zero unless timing is recorded.
    pub ns: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub trials: u64,
    pub epsilon: f64,
    /// Trials with `tv <= epsilon`.
    pub successes: u64,
    pub success_rate: f64,
    pub mean_tv: f64,
    pub quantiles: Quantiles,
}

/// Nearest-rank quantiles of the TV column.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quantiles {
    pub min: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub q90: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub results: Vec<TrialResult>,
    pub summary: Summary,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        for (name, x) in [("epsilon", self.epsilon), ("delta", self.delta)] {
            if !(x > 0.0 && x < 1.0) {
                return Err(Error::Config(format!("{name} = {x} is outside (0, 1)")));
            }
        }
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be at least 1".into()));
        }
        self.constants.validate()?;
        Ok(())
    }
}

/// Reads a config file; returns it with the directory relative paths in it
/// refer to.
pub fn load_config(path: &Path) -> Result<(ExperimentConfig, PathBuf)> {
    let text = io::read_to_string(path)?;
    let config: ExperimentConfig = serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok((config, base))
}

pub fn run_experiment(config: &ExperimentConfig, base_dir: &Path) -> Result<Outcome> {
    config.validate()?;
    let target = config.target.resolve(base_dir)?;
    let learner = Learner::prepare(&config.learner, &target, config.epsilon, base_dir)?;
    let trial = |i: u64| -> Result<TrialResult> {
        let seed = seed::derive(config.master_seed, i);
        let start = config.record_timing.then(Instant::now);
        let report = learner.learn(
            &target,
            config.epsilon,
            config.delta,
            &config.constants,
            seed,
        )?;
        let ns = start.map_or(0, |t| t.elapsed().as_nanos() as u64);
        Ok(TrialResult {
            trial: i,
            seed,
            tv: tv_distance(target.exact(), &report.hypothesis)?,
            samples: report.samples_used,
            bins: report.partition_size,
            ns,
        })
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let attempts: Vec<Result<TrialResult>> =
        pool.install(|| (0..config.trials).into_par_iter().map(trial).collect());
    // The first failing trial by index, whatever the scheduling.
    let results = attempts.into_iter().collect::<Result<Vec<_>>>()?;
    let summary = summarize(&results, config.epsilon);
    Ok(Outcome { results, summary })
}

pub fn summarize(results: &[TrialResult], epsilon: f64) -> Summary {
    let trials = results.len() as u64;
    let successes = results.iter().filter(|r| r.tv <= epsilon).count() as u64;
    let mut tv: Vec<f64> = results.iter().map(|r| r.tv).collect();
    tv.sort_by(f64::total_cmp);
    let rank = |q: f64| -> f64 {
        if tv.is_empty() {
            return f64::NAN;
        }
        let i = (q * tv.len() as f64).ceil() as usize;
        tv[i.clamp(1, tv.len()) - 1]
    };
    Summary {
        trials,
        epsilon,
        successes,
        success_rate: successes as f64 / trials.max(1) as f64,
        // Summed in trial order for reproducibility.
        mean_tv: results.iter().map(|r| r.tv).sum::<f64>() / trials.max(1) as f64,
        quantiles: Quantiles {
            min: rank(0.0),
            q25: rank(0.25),
            median: rank(0.5),
            q75: rank(0.75),
            q90: rank(0.9),
            max: rank(1.0),
        },
    }
}

pub fn write_csv(results: &[TrialResult]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in results {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.trial, r.seed, r.tv, r.samples, r.bins, r.ns
        )
        .unwrap();
    }
    out
}
