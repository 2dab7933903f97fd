use alloc::format;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::mixture::MixtureSpec;
use crate::seed;

use super::{is_log_concave, is_mhr, modality};

/// Weights below this fraction of the largest weight are set to zero.
const FLUSH_RATIO: f64 = 1e-280;
/// Largest tail mass a truncated Poisson may lose.
const MAX_TRUNCATED_MASS: f64 = 1e-6;

/// One member of a distribution family over `[n]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub n: usize,
    #[serde(default)]
    pub seed: u64,
    pub family: Family,
}

/// Family-specific parameters. Closed-form families place the value `v` of
/// the underlying variable at point `v + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Family {
    /// Binomial with `n − 1` trials.
    Binomial {
        prob: f64,
    },
    TruncatedPoisson {
        lambda: f64,
    },
    /// `p(i) ∝ (1 − prob)^(i−1)`.
    Geometric {
        prob: f64,
    },
    DiscreteGaussian {
        mean: f64,
        sigma: f64,
    },
    /// Linear ramps up to `mode` and down from it, zero outside
    /// `[left, right]` (default `[1, n]`).
    Triangle {
        mode: usize,
        #[serde(default)]
        left: Option<usize>,
        #[serde(default)]
        right: Option<usize>,
    },
    RandomLogConcave,
    RandomMhr,
    RandomUnimodal,
    RandomTmodal {
        modes: usize,
    },
}

impl FamilySpec {
    pub fn new(n: usize, family: Family) -> Self {
        FamilySpec { n, seed: 0, family }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// `Binomial(trials, prob)` over `[1, trials + 1]`.
    pub fn binomial(trials: usize, prob: f64) -> Self {
        FamilySpec::new(trials + 1, Family::Binomial { prob })
    }
}

/// Generates the distribution and checks it against its family's defining
/// property.
pub fn generate(spec: &FamilySpec) -> Result<Distribution> {
    let n = spec.n;
    if n == 0 {
        return Err(Error::EmptyDomain);
    }
    let mut rng = seed::rng(seed::derive(spec.seed, 0));
    let p = match spec.family {
        Family::Binomial { prob } => binomial(n, prob)?,
        Family::TruncatedPoisson { lambda } => truncated_poisson(n, lambda)?,
        Family::Geometric { prob } => geometric(n, prob)?,
        Family::DiscreteGaussian { mean, sigma } => discrete_gaussian(n, mean, sigma)?,
        Family::Triangle { mode, left, right } => {
            triangle(n, left.unwrap_or(1), mode, right.unwrap_or(n))?
        }
        Family::RandomLogConcave => random_log_concave(n, &mut rng)?,
        Family::RandomMhr => random_mhr(n, &mut rng)?.0,
        Family::RandomUnimodal => {
            let mut w = alloc::vec![0.0; n];
            unimodal_block(&mut w, &mut rng);
            Distribution::from_weights(w)?
        }
        Family::RandomTmodal { modes } => random_tmodal(n, modes, &mut rng)?,
    };
    let (ok, class) = match spec.family {
        Family::RandomMhr => (is_mhr(&p), "MHR"),
        Family::RandomUnimodal => (modality(&p) == 1, "unimodal"),
        Family::RandomTmodal { modes } => (modality(&p) <= modes, "t-modal"),
        _ => (is_log_concave(&p), "log-concave"),
    };
    if !ok {
        return Err(Error::Infeasible(format!(
            "generated instance is not {class}; adjust the parameters"
        )));
    }
    Ok(p)
}

pub fn generate_mixture(specs: &[FamilySpec], weights: Vec<f64>) -> Result<MixtureSpec> {
    let components = specs.iter().map(generate).collect::<Result<Vec<_>>>()?;
    MixtureSpec::new(components, weights)
}

fn check_prob(name: &'static str, value: f64) -> Result<()> {
    crate::error::check_unit_open(name, value)
}

/// Normalizes weights given as logarithms.
fn from_log_weights(mut logs: Vec<f64>) -> Result<Distribution> {
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !top.is_finite() {
        return Err(Error::Infeasible("all weights vanish".into()));
    }
    let floor = libm::log(FLUSH_RATIO);
    for x in &mut logs {
        let rel = *x - top;
        *x = if rel < floor { 0.0 } else { libm::exp(rel) };
    }
    Distribution::from_weights(logs)
}

fn ln_choose(n: f64, k: f64) -> f64 {
    libm::lgamma(n + 1.0) - libm::lgamma(k + 1.0) - libm::lgamma(n - k + 1.0)
}

fn binomial(n: usize, prob: f64) -> Result<Distribution> {
    if !(0.0..=1.0).contains(&prob) {
        return Err(Error::ParameterOutOfRange {
            name: "prob",
            value: prob,
            range: "[0, 1]",
        });
    }
    let trials = (n - 1) as f64;
    if prob == 0.0 || prob == 1.0 || n == 1 {
        let at = if prob == 1.0 { n } else { 1 };
        return Distribution::point_mass(n, at);
    }
    let (lp, lq) = (libm::log(prob), libm::log1p(-prob));
    let logs = (0..n)
        .map(|k| {
            let k = k as f64;
            ln_choose(trials, k) + k * lp + (trials - k) * lq
        })
        .collect();
    from_log_weights(logs)
}

fn truncated_poisson(n: usize, lambda: f64) -> Result<Distribution> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::ParameterOutOfRange {
            name: "lambda",
            value: lambda,
            range: "(0, ∞)",
        });
    }
    let ll = libm::log(lambda);
    let logs: Vec<f64> = (0..n)
        .map(|k| {
            let k = k as f64;
            k * ll - lambda - libm::lgamma(k + 1.0)
        })
        .collect();
    let kept: f64 = logs.iter().map(|&x| libm::exp(x)).sum();
    let lost = 1.0 - kept;
    if lost > MAX_TRUNCATED_MASS {
        return Err(Error::Infeasible(format!(
            "truncating Poisson({lambda}) to {n} points loses mass {lost:.3e}"
        )));
    }
    from_log_weights(logs)
}

fn geometric(n: usize, prob: f64) -> Result<Distribution> {
    check_prob("prob", prob)?;
    let ratio = 1.0 - prob;
    // Scale the first point so the chain already sums to one; a later
    // division would perturb the constant neighbour ratio.
    let first = prob / (1.0 - libm::pow(ratio, n as f64));
    let mut probs = Vec::with_capacity(n);
    let mut x = first;
    for _ in 0..n {
        probs.push(if x < FLUSH_RATIO * first { 0.0 } else { x });
        x *= ratio;
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        for x in &mut probs {
            *x /= total;
        }
    }
    Distribution::new(probs)
}

fn discrete_gaussian(n: usize, mean: f64, sigma: f64) -> Result<Distribution> {
    if !(sigma > 0.0 && sigma.is_finite()) || !mean.is_finite() {
        return Err(Error::ParameterOutOfRange {
            name: "sigma",
            value: sigma,
            range: "(0, ∞)",
        });
    }
    let logs = (1..=n)
        .map(|i| {
            let z = (i as f64 - mean) / sigma;
            -0.5 * z * z
        })
        .collect();
    from_log_weights(logs)
}

fn triangle(n: usize, left: usize, mode: usize, right: usize) -> Result<Distribution> {
    if !(1 <= left && left <= mode && mode <= right && right <= n) {
        return Err(Error::Infeasible(format!(
            "triangle needs 1 <= left <= mode <= right <= n, got {left}, {mode}, {right} with n = {n}"
        )));
    }
    let up = (mode - left + 1) as f64;
    let down = (right - mode + 1) as f64;
    let weights = (1..=n)
        .map(|i| {
            if i < left || i > right {
                0.0
            } else if i <= mode {
                (i - left + 1) as f64 / up
            } else {
                (right - i + 1) as f64 / down
            }
        })
        .collect();
    Distribution::from_weights(weights)
}

/// Concave log-probabilities on a random sub-interval: sorted random
/// slopes, made strictly decreasing, then accumulated.
fn random_log_concave(n: usize, rng: &mut ChaCha8Rng) -> Result<Distribution> {
    let (lo, len) = if n > 1 && rng.random_bool(0.5) {
        let len = rng.random_range(1..=n);
        (rng.random_range(0..=n - len), len)
    } else {
        (0, n)
    };
    let amplitude = libm::exp(rng.random_range(libm::log(0.5)..libm::log(50.0))) / len as f64;
    let center: f64 = rng.random_range(-0.2..1.2);
    let mut slopes: Vec<f64> = (1..len).map(|_| rng.random::<f64>()).collect();
    slopes.sort_by(|a, b| b.total_cmp(a));
    let mut logs = alloc::vec![f64::NEG_INFINITY; n];
    let mut acc = 0.0;
    logs[lo] = 0.0;
    for (k, u) in slopes.iter().enumerate() {
        acc += amplitude * (u - center) - 1e-9 * (k + 1) as f64;
        logs[lo + k + 1] = acc;
    }
    from_log_weights(logs)
}

/// Samples a non-decreasing hazard sequence (with `H(n) = 1`) and inverts it.
/// Returns the distribution and the hazard sequence it was built from.
pub(crate) fn random_mhr(n: usize, rng: &mut ChaCha8Rng) -> Result<(Distribution, Vec<f64>)> {
    let zero_prefix = if rng.random_bool(0.25) {
        rng.random_range(0..=n / 4)
    } else {
        0
    };
    // Keep Σ −ln(1 − H) bounded so the tail mass stays a normal float.
    let cap = (1.0 - libm::exp(-300.0 / n as f64)).min(0.5);
    let floor = (0.1 / n as f64).min(cap);
    let top = libm::exp(rng.random_range(libm::log(floor)..=libm::log(cap)));
    let bottom = top * rng.random::<f64>();
    let gamma: f64 = if rng.random_bool(0.5) {
        rng.random_range(0.0..1.9)
    } else {
        0.0
    };
    let mut base: Vec<f64> = (0..n).map(|_| rng.random_range(bottom..=top)).collect();
    base.sort_by(f64::total_cmp);
    let hazards: Vec<f64> = (0..n)
        .map(|i| {
            if i + 1 == n {
                1.0
            } else if i < zero_prefix {
                0.0
            } else {
                base[i].max(gamma / (n - i) as f64)
            }
        })
        .collect();
    let mut survival = 1.0;
    let probs: Vec<f64> = hazards
        .iter()
        .map(|&h| {
            let x = h * survival;
            survival *= 1.0 - h;
            x
        })
        .collect();
    Ok((Distribution::from_weights(probs)?, hazards))
}

/// Fills `block` with a random unimodal shape: random heights sorted
/// ascending up to a random mode and descending after it.
fn unimodal_block(block: &mut [f64], rng: &mut ChaCha8Rng) {
    let power = rng.random_range(1.0..4.0);
    for x in block.iter_mut() {
        *x = libm::pow(rng.random::<f64>(), power) + 1e-3;
    }
    block.shuffle(rng);
    let mode = rng.random_range(0..block.len());
    let (up, down) = block.split_at_mut(mode);
    up.sort_by(f64::total_cmp);
    down.sort_by(|a, b| b.total_cmp(a));
}

fn random_tmodal(n: usize, modes: usize, rng: &mut ChaCha8Rng) -> Result<Distribution> {
    if modes == 0 || modes > n {
        return Err(Error::Infeasible(format!(
            "cannot place {modes} modes on {n} points"
        )));
    }
    let mut cuts: Vec<usize> = (1..n).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(modes - 1).collect();
    cuts.sort_unstable();
    cuts.push(n);
    let mut weights = alloc::vec![0.0; n];
    let mut start = 0;
    for end in cuts {
        let block = &mut weights[start..end];
        unimodal_block(block, rng);
        let scale = rng.random_range(0.2..1.0) / block.iter().sum::<f64>();
        block.iter_mut().for_each(|x| *x *= scale);
        start = end;
    }
    Distribution::from_weights(weights)
}
