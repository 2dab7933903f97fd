use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use flathist::harness::{self, BaseSpec, ExperimentConfig, Learner, LearnerSpec, PartitionSpec};
use flathist::io::{self, FamilyMixture, Format};
use flathist::{Error, Result, Target};
use flathist_core::decompose::{
    birge_partition, construct_decomposition, decompose_log_concave, decompose_mhr,
    DecomposeParams, Orientation,
};
use flathist_core::families::{generate, FamilySpec};
use flathist_core::{a_s_distance, kolmogorov_distance, tv_distance, Constants, Distribution};

/// Learn discrete distributions with few-bin histograms.
#[derive(Parser)]
#[command(name = "flathist", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a distribution file from a family spec.
    Generate(GenerateArgs),
    /// Write a partition of a distribution's domain.
    Decompose(DecomposeArgs),
    /// Run a learner and write its report.
    Learn(LearnArgs),
    /// Print the distances between two distributions.
    Eval(EvalArgs),
    /// Run a seeded batch of trials and write per-trial CSV.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Family spec (or family mixture) JSON file.
    #[arg(long, value_name = "PATH", conflicts_with = "spec")]
    config: Option<PathBuf>,
    /// Family spec as inline JSON.
    #[arg(long, value_name = "JSON")]
    spec: Option<String>,
    /// Overrides the spec's seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Defaults to text for `.txt` outputs and JSON otherwise.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Construct,
    LogConcave,
    Mhr,
    Birge,
}

#[derive(Args)]
struct ConstantArgs {
    #[arg(long)]
    c1: Option<f64>,
    #[arg(long)]
    c2: Option<f64>,
    #[arg(long)]
    c3: Option<f64>,
    #[arg(long)]
    c4: Option<f64>,
}

impl ConstantArgs {
    fn apply(&self, mut c: Constants) -> Constants {
        c.c1 = self.c1.unwrap_or(c.c1);
        c.c2 = self.c2.unwrap_or(c.c2);
        c.c3 = self.c3.unwrap_or(c.c3);
        c.c4 = self.c4.unwrap_or(c.c4);
        c
    }
}

/// Which end a monotone target is large at.
#[derive(Clone, Copy, ValueEnum)]
enum Side {
    NonIncreasing,
    NonDecreasing,
}

impl From<Side> for Orientation {
    fn from(s: Side) -> Self {
        match s {
            Side::NonIncreasing => Orientation::NonIncreasing,
            Side::NonDecreasing => Orientation::NonDecreasing,
        }
    }
}

#[derive(Args)]
struct DecomposeArgs {
    /// Distribution, mixture or family spec to decompose.
    #[arg(long, value_name = "PATH")]
    input: PathBuf,
    #[arg(long, value_enum)]
    method: Method,
    #[arg(long)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    /// Flatness parameter of `construct`; sets τ = ε/(4t).
    #[arg(long, conflicts_with = "tau")]
    t: Option<usize>,
    /// Explicit threshold for `construct`.
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long, value_enum)]
    orientation: Option<Side>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(flatten)]
    constants: ConstantArgs,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum LearnerKind {
    Known,
    Unknown,
    Mixture,
    LogConcave,
    Mhr,
    Tmodal,
    GenericToy,
}

#[derive(Clone, Copy, ValueEnum)]
enum PartitionFrom {
    Mhr,
    BirgeNonIncreasing,
    BirgeNonDecreasing,
    Singletons,
    Whole,
}

#[derive(Args)]
struct LearnArgs {
    /// Experiment config supplying target, learner, ε, δ and constants.
    #[arg(long, value_name = "PATH", conflicts_with_all = ["input", "learner"])]
    config: Option<PathBuf>,
    /// Distribution, mixture or family spec to sample from.
    #[arg(long, value_name = "PATH", requires = "learner")]
    input: Option<PathBuf>,
    #[arg(long, value_enum, requires = "input")]
    learner: Option<LearnerKind>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    modes: Option<usize>,
    /// Partition file for the `known` learner.
    #[arg(long, value_name = "PATH", conflicts_with = "partition_from")]
    partition: Option<PathBuf>,
    /// Derive the `known` learner's partition from the target.
    #[arg(long, value_enum)]
    partition_from: Option<PartitionFrom>,
    /// `generic-toy`: size of the sample that gets split.
    #[arg(long)]
    sample_size: Option<u64>,
    /// `generic-toy`: smallest part of a split.
    #[arg(long)]
    min_part: Option<u64>,
    /// `generic-toy`: tournament sample size.
    #[arg(long)]
    selection_samples: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(flatten)]
    constants: ConstantArgs,
}

#[derive(Args)]
struct EvalArgs {
    left: PathBuf,
    right: PathBuf,
    /// Also print the distance over unions of at most this many intervals.
    #[arg(long)]
    s: Option<usize>,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Overrides `master_seed`.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
    /// CSV destination; overrides `output`.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Also write the summary JSON here.
    #[arg(long, value_name = "PATH")]
    summary: Option<PathBuf>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Generate(a) => run_generate(a),
        Command::Decompose(a) => run_decompose(a),
        Command::Learn(a) => run_learn(a),
        Command::Eval(a) => run_eval(a),
        Command::Experiment(a) => run_experiment(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => io::write_string(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn usage(message: impl Into<String>) -> Error {
    Error::Usage(message.into())
}

fn run_generate(a: GenerateArgs) -> Result<()> {
    let (origin, text) = match (&a.config, &a.spec) {
        (Some(path), None) => (path.display().to_string(), io::read_to_string(path)?),
        (None, Some(json)) => ("--spec".to_string(), json.clone()),
        _ => return Err(usage("generate needs exactly one of --config or --spec")),
    };
    let value: serde_json::Value = io::parse_json(&origin, &text)?;
    let p: Distribution = if value.get("components").is_some() {
        let mut mix: FamilyMixture = io::parse_json(&origin, &text)?;
        if let Some(seed) = a.seed {
            for (i, c) in mix.components.iter_mut().enumerate() {
                c.seed = flathist_core::seed::derive(seed, i as u64);
            }
        }
        mix.build()?.to_distribution().clone()
    } else {
        let mut spec: FamilySpec = io::parse_json(&origin, &text)?;
        if let Some(seed) = a.seed {
            spec.seed = seed;
        }
        generate(&spec)?
    };
    let format = a
        .format
        .or(a.out.as_deref().map(Format::from_path))
        .unwrap_or_default();
    emit(a.out.as_deref(), &io::format_distribution(&p, format))
}

fn run_decompose(a: DecomposeArgs) -> Result<()> {
    let target = io::read_target(&a.input)?;
    let constants = a.constants.apply(Constants::default());
    let partition = match a.method {
        Method::Construct => {
            let params = match (a.t, a.tau) {
                (Some(t), None) => DecomposeParams::for_flatness(a.epsilon, a.delta, t)?,
                (None, Some(tau)) => DecomposeParams::new(a.epsilon, a.delta, tau)?,
                _ => return Err(usage("construct needs exactly one of --t or --tau")),
            };
            construct_decomposition(&target, &params, &constants, a.seed)?.partition
        }
        Method::LogConcave => {
            decompose_log_concave(&target, a.epsilon, a.delta, &constants, a.seed)?.partition
        }
        Method::Mhr => decompose_mhr(target.exact(), a.epsilon)?.partition,
        Method::Birge => {
            let orientation = a
                .orientation
                .ok_or_else(|| usage("birge needs --orientation"))?;
            birge_partition(target.n(), a.epsilon, orientation.into())?
        }
    };
    emit(a.out.as_deref(), &io::to_json(&partition))
}

fn learner_from_flags(a: &LearnArgs, kind: LearnerKind) -> Result<LearnerSpec> {
    let need = |v: Option<usize>, flag: &str| {
        v.ok_or_else(|| usage(format!("this learner needs --{flag}")))
    };
    if kind != LearnerKind::Known && (a.partition.is_some() || a.partition_from.is_some()) {
        return Err(usage(
            "--partition and --partition-from only apply to --learner known",
        ));
    }
    Ok(match kind {
        LearnerKind::Known => {
            let partition = match (&a.partition, a.partition_from) {
                (Some(path), None) => PartitionSpec::File { path: path.clone() },
                (None, Some(PartitionFrom::Mhr)) => PartitionSpec::Mhr,
                (None, Some(PartitionFrom::BirgeNonIncreasing)) => PartitionSpec::Birge {
                    orientation: Orientation::NonIncreasing,
                },
                (None, Some(PartitionFrom::BirgeNonDecreasing)) => PartitionSpec::Birge {
                    orientation: Orientation::NonDecreasing,
                },
                (None, Some(PartitionFrom::Singletons)) => PartitionSpec::Singletons,
                (None, Some(PartitionFrom::Whole)) => PartitionSpec::Whole,
                _ => return Err(usage("known needs --partition or --partition-from")),
            };
            LearnerSpec::Known { partition }
        }
        LearnerKind::Unknown => LearnerSpec::Unknown { t: need(a.t, "t")? },
        LearnerKind::Mixture => LearnerSpec::Mixture {
            k: need(a.k, "k")?,
            t: need(a.t, "t")?,
        },
        LearnerKind::LogConcave => LearnerSpec::LogConcave {
            k: a.k.unwrap_or(1),
        },
        LearnerKind::Mhr => LearnerSpec::Mhr {
            k: a.k.unwrap_or(1),
        },
        LearnerKind::Tmodal => LearnerSpec::Tmodal {
            k: a.k.unwrap_or(1),
            modes: a.modes.unwrap_or(1),
        },
        LearnerKind::GenericToy => LearnerSpec::GenericToy {
            k: need(a.k, "k")?,
            sample_size: a
                .sample_size
                .ok_or_else(|| usage("generic-toy needs --sample-size"))?,
            min_part: a.min_part.unwrap_or(1),
            selection_samples: a.selection_samples,
            base: match a.t {
                Some(t) => BaseSpec::Unknown { t },
                None => BaseSpec::Empirical,
            },
        },
    })
}

fn run_learn(a: LearnArgs) -> Result<()> {
    let (target, spec, epsilon, delta, constants, base_dir) = match (&a.config, &a.input, a.learner)
    {
        (Some(path), None, None) => {
            let (config, base) = harness::load_config(path)?;
            let target = config.target.resolve(&base)?;
            (
                target,
                config.learner,
                a.epsilon.unwrap_or(config.epsilon),
                a.delta.unwrap_or(config.delta),
                a.constants.apply(config.constants),
                base,
            )
        }
        (None, Some(input), Some(kind)) => {
            let target: Target = io::read_target(input)?;
            let epsilon = a.epsilon.ok_or_else(|| usage("learn needs --epsilon"))?;
            (
                target,
                learner_from_flags(&a, kind)?,
                epsilon,
                a.delta.unwrap_or(0.1),
                a.constants.apply(Constants::default()),
                PathBuf::new(),
            )
        }
        _ => return Err(usage("learn needs --config, or --input with --learner")),
    };
    let learner = Learner::prepare(&spec, &target, epsilon, &base_dir)?;
    let start = Instant::now();
    let mut report = learner.learn(&target, epsilon, delta, &constants, a.seed)?;
    report.wall_time_ns = start.elapsed().as_nanos() as u64;
    emit(a.out.as_deref(), &io::to_json(&report))
}

fn run_eval(a: EvalArgs) -> Result<()> {
    let p = io::read_target(&a.left)?;
    let q = io::read_target(&a.right)?;
    let (p, q) = (p.exact(), q.exact());
    let mut line = format!(
        "tv={} kolmogorov={}",
        tv_distance(p, q)?,
        kolmogorov_distance(p, q)?
    );
    if let Some(s) = a.s {
        line.push_str(&format!(" a_s={}", a_s_distance(p, q, s)?));
    }
    println!("{line}");
    Ok(())
}

fn run_experiment(a: ExperimentArgs) -> Result<()> {
    let (mut config, base): (ExperimentConfig, PathBuf) = harness::load_config(&a.config)?;
    config.master_seed = a.seed.unwrap_or(config.master_seed);
    config.threads = a.threads.or(config.threads);
    config.trials = a.trials.unwrap_or(config.trials);
    config.epsilon = a.epsilon.unwrap_or(config.epsilon);
    config.delta = a.delta.unwrap_or(config.delta);
    // The output flag is relative to the working directory, the config
    // field to the config file.
    let output = a
        .out
        .clone()
        .or(config.output.as_ref().map(|p| base.join(p)));
    let outcome = harness::run_experiment(&config, &base)?;
    let csv = harness::write_csv(&outcome.results);
    let summary = io::to_json(&outcome.summary);
    if let Some(path) = &a.summary {
        io::write_string(path, &summary)?;
    }
    match output {
        Some(path) => {
            io::write_string(&path, &csv)?;
            print!("{summary}");
        }
        None => {
            print!("{csv}");
            eprint!("{summary}");
        }
    }
    Ok(())
}
