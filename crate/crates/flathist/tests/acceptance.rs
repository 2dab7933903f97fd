//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use flathist::harness::{
    run_experiment, ExperimentConfig, LearnerSpec, TargetSpec, SCHEMA_VERSION,
};
use flathist::io::FamilyMixture;
use flathist_core::decompose::{
    construct_decomposition, decompose_mhr, flattening_error, mhr_interval_bound, DecomposeParams,
};
use flathist_core::families::{generate, generate_mixture, Family, FamilySpec};
use flathist_core::learn::{
    generic_mixture_learn, learn_tmodal_mixture, learn_unknown_decomposition, select_hypothesis,
    EmpiricalLearner, GenericConfig,
};
use flathist_core::{
    a_s_distance, flatten, sample, seed, tv_distance, Constants, Distribution, IntervalPartition,
    MixtureSpec,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const C: Constants = Constants {
    c1: 4.0,
    c2: 4.0,
    c3: 64.0,
    c4: 8.0,
};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn rng(stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed::derive(0xACCE_55ED, stream))
}

fn random_weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let power = rng.random_range(1.0..6.0);
    let mut w: Vec<f64> = (0..n).map(|_| rng.random::<f64>().powf(power)).collect();
    // Some zeros, and never all of them.
    for x in w.iter_mut() {
        if rng.random_bool(0.1) {
            *x = 0.0;
        }
    }
    let i = rng.random_range(0..n);
    w[i] += 1.0;
    w
}

fn random_partition(rng: &mut ChaCha8Rng, n: usize, cut: f64) -> (IntervalPartition, Vec<bool>) {
    let cuts: Vec<bool> = (1..n).map(|_| rng.random_bool(cut)).collect();
    (from_cuts(&cuts), cuts)
}

fn from_cuts(cuts: &[bool]) -> IntervalPartition {
    let n = cuts.len() + 1;
    let mut ends: Vec<usize> = (1..n).filter(|&i| cuts[i - 1]).collect();
    ends.push(n);
    IntervalPartition::from_right_ends(n, &ends).unwrap()
}

fn refinement_lemma() -> Verdict {
    let mut rng = rng(1);
    let mut held = 0;
    for _ in 0..1000 {
        let n = rng.random_range(1..=50);
        let p = Distribution::from_weights(random_weights(&mut rng, n)).unwrap();
        let density = rng.random_range(0.05..0.6);
        let (coarse, cuts) = random_partition(&mut rng, n, density);
        let fine_cuts: Vec<bool> = cuts.iter().map(|&c| c || rng.random_bool(0.3)).collect();
        let fine = from_cuts(&fine_cuts);
        assert!(fine.refines(&coarse));
        let e_p = tv_distance(&p, &flatten(&p, &coarse).unwrap()).unwrap();
        let e_j = tv_distance(&p, &flatten(&p, &fine).unwrap()).unwrap();
        held += usize::from(e_j <= 2.0 * e_p + 1e-9);
    }
    verdict(
        held == 1000,
        format!("{held}/1000 refinements within 2x + 1e-9"),
    )
}

fn decompose_mhr_exactness() -> Verdict {
    let n = 10_000;
    let mut worst_ratio = 0.0f64;
    let mut over_count = 0;
    let mut bad = 0;
    let mut max_size = 0;
    for s in 0..100 {
        let p = generate(&FamilySpec::new(n, Family::RandomMhr).with_seed(s)).unwrap();
        for eps in [0.05, 0.1] {
            let d = decompose_mhr(&p, eps).unwrap();
            let err = flattening_error(&p, &d.partition).unwrap();
            worst_ratio = worst_ratio.max(err / eps);
            bad += usize::from(err > eps);
            max_size = max_size.max(d.partition.len());
            over_count += usize::from(d.partition.len() as f64 > mhr_interval_bound(n, eps, &C));
        }
    }
    verdict(
        bad == 0 && over_count == 0,
        format!(
            "200 decompositions: {bad} over ε (worst TV/ε = {worst_ratio:.3}), {over_count} over the size bound (largest {max_size})"
        ),
    )
}

fn interval_counts() -> Verdict {
    let mut rng = rng(3);
    let mut over = 0;
    for run in 0..10_000u64 {
        let n = rng.random_range(1..=1_000);
        let p = Distribution::from_weights(random_weights(&mut rng, n)).unwrap();
        let eps = rng.random_range(0.2..0.95);
        let tau = rng.random_range(0.01..1.0);
        let params = DecomposeParams::new(eps, 0.1, tau).unwrap();
        let d = construct_decomposition(&p, &params, &C, run).unwrap();
        over += usize::from(d.partition.len() > params.max_intervals());
    }
    let mut learn_over = 0;
    let mut tightest = 0.0f64;
    for run in 0..500u64 {
        let n = rng.random_range(1..=5_000);
        let p = Distribution::from_weights(random_weights(&mut rng, n)).unwrap();
        let t = rng.random_range(1..=6);
        let eps = rng.random_range(0.1..0.6);
        let r = learn_unknown_decomposition(&p, t, eps, 0.1, &C, run).unwrap();
        let bound = 8.0 * t as f64 / eps;
        tightest = tightest.max(r.partition_size as f64 / bound);
        learn_over += usize::from(r.partition_size as f64 > bound);
    }
    verdict(
        over == 0 && learn_over == 0,
        format!(
            "10000 scans: {over} over ⌈2/τ⌉; 500 learner runs: {learn_over} over 8t/ε (largest size/bound {tightest:.3})"
        ),
    )
}

fn experiment(
    target: TargetSpec,
    learner: LearnerSpec,
    epsilon: f64,
    trials: u64,
    master_seed: u64,
) -> ExperimentConfig {
    ExperimentConfig {
        schema_version: SCHEMA_VERSION,
        target,
        learner,
        epsilon,
        delta: 0.1,
        trials,
        master_seed,
        constants: C,
        output: None,
        threads: None,
        record_timing: false,
    }
}

fn log_concave_singles() -> Verdict {
    let cases = [
        ("Binomial(1e5, 0.5)", FamilySpec::binomial(100_000, 0.5)),
        (
            "TruncPoisson(500, 1e4)",
            FamilySpec::new(10_000, Family::TruncatedPoisson { lambda: 500.0 }),
        ),
        (
            "Geometric(0.01, 1e4)",
            FamilySpec::new(10_000, Family::Geometric { prob: 0.01 }),
        ),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (i, (name, spec)) in cases.into_iter().enumerate() {
        let cfg = experiment(
            TargetSpec::Family(spec),
            LearnerSpec::LogConcave { k: 1 },
            0.1,
            50,
            40 + i as u64,
        );
        let s = run_experiment(&cfg, Path::new(".")).unwrap().summary;
        pass &= s.successes >= 45;
        parts.push(format!(
            "{name} {}/50 (median TV {:.4})",
            s.successes, s.quantiles.median
        ));
    }
    verdict(pass, parts.join(", "))
}

fn log_concave_mixture() -> Verdict {
    let mix = FamilyMixture {
        components: [0.2, 0.5, 0.8]
            .map(|q| FamilySpec::binomial(100_000, q))
            .to_vec(),
        weights: vec![0.5, 0.3, 0.2],
    };
    let cfg = experiment(
        TargetSpec::Mixture(mix),
        LearnerSpec::LogConcave { k: 3 },
        0.15,
        50,
        5,
    );
    let s = run_experiment(&cfg, Path::new(".")).unwrap().summary;
    verdict(
        s.successes >= 45,
        format!(
            "{}/50 within ε = 0.15 (median TV {:.4}, max {:.4})",
            s.successes, s.quantiles.median, s.quantiles.max
        ),
    )
}

/// Mass of `[a, b]` summed directly; prefix differences lose far tails.
fn sum(p: &[f64], a: usize, b: usize) -> f64 {
    p[a - 1..b].iter().sum()
}

fn structural_lemmas() -> Verdict {
    let mut rng = rng(6);
    let (mut lcc_checked, mut lcc_bad) = (0, 0);
    let mut s = 0u64;
    while lcc_checked < 10_000 {
        s += 1;
        let n = rng.random_range(3..=400);
        let p = generate(&FamilySpec::new(n, Family::RandomLogConcave).with_seed(s)).unwrap();
        let probs = p.probs();
        // 1-based mode; p is non-decreasing and log-concave on [1, mode].
        let mode = 1
            + (0..n)
                .max_by(|&a, &b| probs[a].total_cmp(&probs[b]))
                .unwrap();
        let first = 1 + probs.iter().position(|&x| x > 0.0).unwrap();
        if mode <= first {
            continue;
        }
        let b = rng.random_range(first + 1..=mode);
        let a = rng.random_range(first + 1..=b);
        let (tau, sigma) = (sum(probs, a, b), sum(probs, 1, a - 1));
        let bound = 1.0 + tau / sigma;
        lcc_bad += usize::from(probs[b - 1] / probs[a - 1] > bound + 1e-9 * bound);
        lcc_checked += 1;
    }
    let (mut mhr_checked, mut mhr_bad) = (0, 0);
    while mhr_checked < 10_000 {
        s += 1;
        let n = rng.random_range(2..=400);
        let p = generate(&FamilySpec::new(n, Family::RandomMhr).with_seed(s)).unwrap();
        let probs = p.probs();
        let b = rng.random_range(1..n);
        let a = rng.random_range(1..=b);
        let right = sum(probs, b + 1, n);
        if right <= 0.0 {
            continue;
        }
        let eta = sum(probs, a, b) / right;
        let bound = probs[a - 1] / (1.0 + eta);
        mhr_bad += usize::from(probs[b] < bound - 1e-9 * bound);
        mhr_checked += 1;
    }
    verdict(
        lcc_bad == 0 && mhr_bad == 0,
        format!("log-concave near-uniformity {lcc_bad} violations / 10000; MHR quasi-monotonicity {mhr_bad} violations / 10000"),
    )
}

fn flattening_convergence() -> Verdict {
    let mut rng = rng(7);
    let (n, parts, eps) = (1_000, 20, 0.05);
    let m = (4.0 * (parts as f64 + 10f64.ln()) / (eps * eps)).ceil() as u64;
    let mut ok = 0;
    for trial in 0..200u64 {
        let p = Distribution::from_weights(random_weights(&mut rng, n)).unwrap();
        let mut ends: Vec<usize> = rand::seq::index::sample(&mut rng, n - 1, parts - 1)
            .into_iter()
            .map(|i| i + 1)
            .collect();
        ends.sort_unstable();
        ends.push(n);
        let part = IntervalPartition::from_right_ends(n, &ends).unwrap();
        let e = sample(&p, m, trial).unwrap();
        let d = tv_distance(&flatten(&p, &part).unwrap(), &flatten(&e, &part).unwrap()).unwrap();
        ok += usize::from(d <= eps);
    }
    verdict(ok >= 180, format!("{ok}/200 within ε = 0.05 at m = {m}"))
}

/// Dyadic pmf: integer weights summing to 2¹⁰, so every partial sum is
/// exact.
fn dyadic(rng: &mut ChaCha8Rng, n: usize) -> Distribution {
    let mut cuts: Vec<u32> = (0..n - 1).map(|_| rng.random_range(0..=1024)).collect();
    cuts.push(0);
    cuts.push(1024);
    cuts.sort_unstable();
    Distribution::new(
        cuts.windows(2)
            .map(|w| (w[1] - w[0]) as f64 / 1024.0)
            .collect(),
    )
    .unwrap()
}

/// Exhaustive `𝒜_s` over every union of at most `s` intervals.
fn a_s_exhaustive(p: &[f64], q: &[f64], s: usize) -> f64 {
    let n = p.len();
    let mut best = 0.0f64;
    for mask in 0u32..1 << n {
        let runs = (0..n)
            .filter(|&i| mask >> i & 1 == 1 && (i == 0 || mask >> (i - 1) & 1 == 0))
            .count();
        if runs > s {
            continue;
        }
        let diff: f64 = (0..n)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| p[i] - q[i])
            .sum();
        best = best.max(diff.abs());
    }
    best
}

fn a_s_oracle() -> Verdict {
    let mut rng = rng(8);
    let mut equal = 0;
    for _ in 0..500 {
        let n = rng.random_range(1..=12);
        let (p, q) = (dyadic(&mut rng, n), dyadic(&mut rng, n));
        let s = rng.random_range(1..=3);
        let dp = a_s_distance(&p, &q, s).unwrap();
        equal += usize::from(dp == a_s_exhaustive(p.probs(), q.probs(), s));
    }
    verdict(equal == 500, format!("{equal}/500 pairs equal exactly"))
}

fn generic_learner() -> Verdict {
    let mut rng = rng(9);
    let comps = vec![
        Distribution::new(vec![0.0, 0.9, 0.05, 0.0, 0.0, 0.0, 0.0, 0.05]).unwrap(),
        Distribution::new(vec![0.05, 0.0, 0.0, 0.0, 0.0, 0.05, 0.9, 0.0]).unwrap(),
    ];
    let p = MixtureSpec::new(comps, vec![0.5, 0.5]).unwrap();
    let cfg = GenericConfig {
        k: 2,
        sample_size: 10,
        min_part: 1,
        selection_samples: None,
    };
    let good = (0..50u64)
        .filter(|&s| {
            let r = generic_mixture_learn(
                &p,
                &EmpiricalLearner,
                &cfg,
                0.2,
                0.1,
                &C,
                seed::derive(90, s),
            )
            .unwrap();
            tv_distance(&p, &r.hypothesis).unwrap() <= 0.25
        })
        .count();

    let eps = 0.1;
    let mut slates_ok = 0;
    for s in 0..50u64 {
        let n = rng.random_range(5..=60);
        let truth = Distribution::from_weights(random_weights(&mut rng, n)).unwrap();
        let mut slate: Vec<Distribution> = (0..4)
            .map(|_| {
                // Blend of the truth with noise at a random strength.
                let lam = rng.random_range(0.0..1.0);
                let noise = random_weights(&mut rng, n);
                let total: f64 = noise.iter().sum();
                let w = truth
                    .probs()
                    .iter()
                    .zip(&noise)
                    .map(|(t, x)| (1.0 - lam) * t + lam * x / total)
                    .collect();
                Distribution::from_weights(w).unwrap()
            })
            .collect();
        slate.insert(rng.random_range(0..=4), truth.clone());
        let w = select_hypothesis(&slate, &truth, eps, 0.1, &C, seed::derive(91, s)).unwrap();
        let tv: Vec<f64> = slate
            .iter()
            .map(|h| tv_distance(&truth, h).unwrap())
            .collect();
        let best = tv.iter().cloned().fold(f64::INFINITY, f64::min);
        slates_ok += usize::from(tv[w] <= 10.0 * best + eps);
    }
    verdict(
        good >= 45 && slates_ok == 50,
        format!(
            "A′ toy {good}/50 within 0.25; tournament {slates_ok}/50 slates within 10·best + ε"
        ),
    )
}

fn tmodal_mixture() -> Verdict {
    let n = 10_000;
    let bump = |left, mode, right| {
        FamilySpec::new(
            n,
            Family::Triangle {
                mode,
                left: Some(left),
                right: Some(right),
            },
        )
    };
    let mix = generate_mixture(
        &[bump(1, 1_500, 5_000), bump(5_001, 8_000, n)],
        vec![0.4, 0.6],
    )
    .unwrap();
    let good = (0..50u64)
        .filter(|&s| {
            let r = learn_tmodal_mixture(&mix, 2, 1, 0.1, 0.1, &C, seed::derive(100, s)).unwrap();
            tv_distance(&mix, &r.hypothesis).unwrap() <= 0.1
        })
        .count();
    verdict(good >= 45, format!("{good}/50 within ε = 0.1"))
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let config = r#"{"schema_version":1,
        "target":{"mixture":{"components":[
            {"n":20001,"family":{"kind":"binomial","prob":0.3}},
            {"n":20001,"family":{"kind":"random-mhr"},"seed":4}],"weights":[0.7,0.3]}},
        "learner":{"kind":"mixture","k":2,"t":40},
        "epsilon":0.1,"delta":0.1,"trials":24,"master_seed":11}"#;
    std::fs::write(dir.path().join("exp.json"), config).unwrap();
    let mut csvs = Vec::new();
    for (threads, name) in [
        ("1", "a.csv"),
        ("8", "b.csv"),
        ("1", "c.csv"),
        ("8", "d.csv"),
    ] {
        let status = Command::new(env!("CARGO_BIN_EXE_flathist"))
            .current_dir(dir.path())
            .args([
                "experiment",
                "--config",
                "exp.json",
                "--threads",
                threads,
                "--out",
                name,
            ])
            .output()
            .unwrap();
        assert!(
            status.status.success(),
            "{}",
            String::from_utf8_lossy(&status.stderr)
        );
        csvs.push(std::fs::read(dir.path().join(name)).unwrap());
    }
    let same = csvs.windows(2).all(|w| w[0] == w[1]);
    verdict(
        same,
        format!(
            "4 runs (1, 8, 1, 8 threads): {} bytes each, identical = {same}",
            csvs[0].len()
        ),
    )
}

fn main() -> ExitCode {
    type Check = fn() -> Verdict;
    let criteria: [(u32, &str, Check, Option<Duration>); 11] = [
        (
            1,
            "refinement lemma",
            refinement_lemma,
            Some(Duration::from_secs(5)),
        ),
        (
            2,
            "Decompose-MHR exactness",
            decompose_mhr_exactness,
            Some(Duration::from_secs(30)),
        ),
        (3, "interval-count bounds", interval_counts, None),
        (
            4,
            "log-concave learning",
            log_concave_singles,
            Some(Duration::from_secs(120)),
        ),
        (
            5,
            "log-concave mixture learning",
            log_concave_mixture,
            Some(Duration::from_secs(300)),
        ),
        (6, "structural lemmas", structural_lemmas, None),
        (
            7,
            "empirical flattening convergence",
            flattening_convergence,
            None,
        ),
        (8, "a_s distance oracle", a_s_oracle, None),
        (9, "generic learner and tournament", generic_learner, None),
        (10, "t-modal mixture learning", tmodal_mixture, None),
        (11, "experiment determinism", determinism, None),
    ];
    let mut failed = 0;
    for (id, name, check, limit) in criteria {
        let start = Instant::now();
        let v = check();
        let took = start.elapsed();
        let in_time = limit.is_none_or(|l| took <= l);
        let pass = v.pass && in_time;
        failed += usize::from(!pass);
        let budget = limit.map_or(String::new(), |l| format!(" of {}s", l.as_secs()));
        println!(
            "criterion {id:>2} {}: {name}: {} [{:.2}s{budget}]",
            if pass { "PASS" } else { "FAIL" },
            v.detail,
            took.as_secs_f64()
        );
    }
    println!("acceptance: {}/11 criteria passed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
