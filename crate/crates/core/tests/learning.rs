//! Seeded statistical checks of the learners against exact TV.

use flathist_core::decompose::{decompose_mhr, flattening_error, DecomposeParams};
use flathist_core::families::{generate, generate_mixture, Family, FamilySpec};
use flathist_core::learn::*;
use flathist_core::{
    flatten, sample, seed, tv_distance, Constants, Distribution, IntervalPartition, MixtureSpec,
    Pmf, SampleSource,
};

const C: Constants = Constants {
    c1: 4.0,
    c2: 4.0,
    c3: 64.0,
    c4: 8.0,
};

/// Number of seeds in `0..trials` whose hypothesis is within `eps` of `p`.
fn successes<P, F>(p: &P, trials: u64, eps: f64, learn: F) -> usize
where
    P: Pmf + ?Sized,
    F: Fn(u64) -> LearnReport,
{
    (0..trials)
        .filter(|&s| tv_distance(p, &learn(s).hypothesis).unwrap() <= eps)
        .count()
}

#[test]
fn defaults_match() {
    assert_eq!(C, Constants::default());
}

#[test]
fn known_partition_from_mhr_decomposition() {
    let p = generate(&FamilySpec::binomial(1000, 0.3)).unwrap();
    let part = decompose_mhr(&p, 0.05).unwrap().partition;
    let ok = successes(&p, 50, 0.1, |s| {
        learn_known_decomposition(&p, &part, 0.05, 0.1, &C, s).unwrap()
    });
    assert!(ok >= 45, "{ok}/50");
}

#[test]
fn known_on_empirical_example() {
    // Hand check of the deterministic step.
    let e = flathist_core::EmpiricalDistribution::from_counts(vec![5, 1, 1, 3]).unwrap();
    let part = IntervalPartition::from_right_ends(4, &[2, 4]).unwrap();
    let h = flatten(&e, &part).unwrap();
    let expect = [0.3, 0.3, 0.2, 0.2];
    for (a, b) in h.dense().iter().zip(expect) {
        assert!((a - b).abs() < 1e-15);
    }
}

#[test]
fn unknown_on_uniform() {
    let p = Distribution::uniform(10_000).unwrap();
    let ok = successes(&p, 30, 0.1, |s| {
        learn_unknown_decomposition(&p, 1, 0.1, 0.1, &C, s).unwrap()
    });
    assert!(ok >= 27, "{ok}/30");
}

#[test]
fn unknown_partition_size_bound() {
    let sources: Vec<Distribution> = vec![
        Distribution::uniform(5_000).unwrap(),
        generate(&FamilySpec::new(2_000, Family::RandomTmodal { modes: 4 }).with_seed(3)).unwrap(),
        generate(&FamilySpec::new(3_000, Family::Geometric { prob: 0.002 })).unwrap(),
        Distribution::from_weights((1..=4_000).map(|i| ((i * 7919) % 101) as f64).collect())
            .unwrap(),
    ];
    for (i, p) in sources.iter().enumerate() {
        for (t, eps) in [(1, 0.1), (2, 0.15), (3, 0.3), (5, 0.25)] {
            for s in 0..5 {
                let r = learn_unknown_decomposition(p, t, eps, 0.1, &C, s).unwrap();
                assert!(
                    r.partition_size as f64 <= 8.0 * t as f64 / eps,
                    "source {i}"
                );
            }
        }
    }
}

#[test]
fn reports_are_deterministic_and_serializable() {
    let p = generate(&FamilySpec::binomial(500, 0.4)).unwrap();
    let a = learn_log_concave(&p, 0.1, 0.1, &C, 77).unwrap();
    let b = learn_log_concave(&p, 0.1, 0.1, &C, 77).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.seed, 77);
    assert_eq!(a.wall_time_ns, 0);
    let text = serde_json::to_string(&a).unwrap();
    assert_eq!(serde_json::from_str::<LearnReport>(&text).unwrap(), a);
    assert_ne!(a, learn_log_concave(&p, 0.1, 0.1, &C, 78).unwrap());
}

#[test]
fn sample_accounting() {
    let p = generate(&FamilySpec::new(2_000, Family::Geometric { prob: 0.003 })).unwrap();
    let r = learn_unknown_decomposition(&p, 4, 0.2, 0.1, &C, 1).unwrap();
    let params = DecomposeParams::for_flatness(0.2, 0.05, 4).unwrap();
    let m1 = flathist_core::decompose::construct_sample_budget(&params, &C);
    assert_eq!(r.stages[0].samples, m1);
    assert_eq!(
        r.stages[1].samples,
        known_sample_budget(r.partition_size, 0.2, 0.05, &C)
    );
    assert_eq!(r.samples_used, m1 + r.stages[1].samples);
}

#[test]
fn k1_mixture_reduces_to_unknown() {
    let p = generate(&FamilySpec::new(1_000, Family::RandomUnimodal).with_seed(4)).unwrap();
    for s in 0..5 {
        let a = learn_mixture(&p, 1, 7, 0.2, 0.1, &C, s).unwrap();
        let b = learn_unknown_decomposition(&p, 7, 0.2, 0.1, &C, s).unwrap();
        assert_eq!(a.hypothesis, b.hypothesis);
    }
}

fn binomial_mixture() -> MixtureSpec {
    let specs = [0.2, 0.5, 0.8].map(|q| FamilySpec::binomial(100_000, q));
    generate_mixture(&specs, vec![0.5, 0.3, 0.2]).unwrap()
}

#[test]
fn mixture_refinement_structure() {
    let mix = binomial_mixture();
    let eps = 0.05;
    let decs: Vec<_> = mix
        .components()
        .iter()
        .map(|c| decompose_mhr(c, eps).unwrap())
        .collect();
    let t = decs.iter().map(|d| d.partition.len()).max().unwrap();
    let worst = mix
        .components()
        .iter()
        .zip(&decs)
        .map(|(c, d)| flattening_error(c, &d.partition).unwrap())
        .fold(0.0, f64::max);
    let refined = decs[0]
        .partition
        .common_refinement(&decs[1].partition)
        .unwrap()
        .common_refinement(&decs[2].partition)
        .unwrap();
    assert!(refined.len() <= 3 * t);
    assert!(flattening_error(&mix, &refined).unwrap() <= 2.0 * worst + 1e-12);
}

#[test]
fn mixture_of_binomials() {
    let mix = binomial_mixture();
    let eps = 0.15;
    // t = ⌈C₂ ln(1/ε)/ε⌉ per component.
    let t = (4.0 * (1.0f64 / eps).ln() / eps).ceil() as usize;
    let ok = successes(&mix, 20, eps, |s| {
        learn_mixture(&mix, 3, t, eps, 0.1, &C, s).unwrap()
    });
    assert!(ok >= 18, "{ok}/20");
}

#[test]
fn log_concave_singles() {
    let geo = generate(&FamilySpec::new(10_000, Family::Geometric { prob: 0.01 })).unwrap();
    let ok = successes(&geo, 30, 0.1, |s| {
        learn_log_concave(&geo, 0.1, 0.1, &C, s).unwrap()
    });
    assert!(ok >= 27, "geometric {ok}/30");
    let bin = generate(&FamilySpec::binomial(100_000, 0.5)).unwrap();
    let ok = successes(&bin, 20, 0.05, |s| {
        learn_log_concave(&bin, 0.05, 0.1, &C, s).unwrap()
    });
    assert!(ok >= 18, "binomial {ok}/20");
}

#[test]
fn log_concave_mixture() {
    let specs = [0.2, 0.8].map(|q| FamilySpec::binomial(100_000, q));
    let mix = generate_mixture(&specs, vec![0.5, 0.5]).unwrap();
    let ok = successes(&mix, 20, 0.1, |s| {
        learn_log_concave_mixture(&mix, 2, 0.1, 0.1, &C, s).unwrap()
    });
    assert!(ok >= 18, "{ok}/20");
}

#[test]
fn mhr_mixtures() {
    let n = 1_000;
    let single = generate(&FamilySpec::new(n, Family::RandomMhr).with_seed(9)).unwrap();
    let ok = successes(&single, 20, 0.1, |s| {
        learn_mhr_mixture(&single, 1, 0.1, 0.1, &C, s).unwrap()
    });
    assert!(ok >= 18, "single {ok}/20");

    // A non-decreasing component next to a geometric tail shifted right.
    let rising = Distribution::from_weights((1..=n).map(|i| i as f64).collect()).unwrap();
    let mut tail = vec![0.0; n];
    for (i, x) in tail.iter_mut().enumerate().skip(300) {
        *x = 0.98f64.powi(i as i32 - 300);
    }
    let tail = Distribution::from_weights(tail).unwrap();
    let mix = MixtureSpec::new(vec![rising, tail], vec![0.4, 0.6]).unwrap();
    let ok = successes(&mix, 20, 0.15, |s| {
        learn_mhr_mixture(&mix, 2, 0.15, 0.1, &C, s).unwrap()
    });
    assert!(ok >= 18, "rising + tail {ok}/20");

    let specs = [3, 4].map(|s| FamilySpec::new(n, Family::RandomMhr).with_seed(s));
    let mix = generate_mixture(&specs, vec![0.7, 0.3]).unwrap();
    let ok = successes(&mix, 20, 0.1, |s| {
        learn_mhr_mixture(&mix, 2, 0.1, 0.1, &C, s).unwrap()
    });
    assert!(ok >= 18, "random pair {ok}/20");
}

fn triangle(n: usize, left: usize, mode: usize, right: usize) -> FamilySpec {
    FamilySpec::new(
        n,
        Family::Triangle {
            mode,
            left: Some(left),
            right: Some(right),
        },
    )
}

#[test]
fn tmodal_targets() {
    let n = 10_000;
    let tri = generate(&triangle(n, 1, 3_000, n)).unwrap();
    let ok = successes(&tri, 20, 0.1, |s| {
        learn_tmodal_mixture(&tri, 1, 1, 0.1, 0.1, &C, s).unwrap()
    });
    assert!(ok >= 18, "triangle {ok}/20");

    let mix = generate_mixture(
        &[triangle(n, 1, 2_000, 5_000), triangle(n, 5_001, 9_000, n)],
        vec![0.5, 0.5],
    )
    .unwrap();
    let ok = successes(&mix, 20, 0.1, |s| {
        learn_tmodal_mixture(&mix, 2, 1, 0.1, 0.1, &C, s).unwrap()
    });
    assert!(ok >= 18, "bumps {ok}/20");

    let three =
        generate(&FamilySpec::new(n, Family::RandomTmodal { modes: 3 }).with_seed(5)).unwrap();
    let ok = successes(&three, 20, 0.1, |s| {
        learn_tmodal_mixture(&three, 1, 3, 0.1, 0.1, &C, s).unwrap()
    });
    assert!(ok >= 18, "three modes {ok}/20");
}

#[test]
fn scheffe_picks_the_flattened_empirical() {
    for s in 0..20 {
        let n = 100;
        let p = generate(&FamilySpec::new(n, Family::RandomUnimodal).with_seed(s)).unwrap();
        let e = sample(&p, 10_000, s).unwrap();
        let part = IntervalPartition::from_right_ends(n, &[25, 50, 75, 100]).unwrap();
        let target = flatten(&e, &part).unwrap();
        let mut slate: Vec<Distribution> = (0..4)
            .map(|j| {
                // Mass concentrated on a quarter the target barely covers.
                let w: Vec<f64> = (0..n)
                    .map(|i| if i / 25 == j { 1.0 } else { 1e-3 })
                    .collect();
                Distribution::from_weights(w).unwrap()
            })
            .filter(|c| tv_distance(c, &target).unwrap() >= 0.5)
            .collect();
        let at = (s as usize) % (slate.len() + 1);
        slate.insert(at, target.to_distribution());
        assert_eq!(scheffe_winner(&slate, &e).unwrap(), at);
    }
}

#[test]
fn tournament_quality() {
    let n = 50;
    let eps = 0.1;
    for s in 0..50 {
        let p =
            generate(&FamilySpec::new(n, Family::RandomTmodal { modes: 2 }).with_seed(s)).unwrap();
        let mut slate = vec![p.clone()];
        for j in 1..5u64 {
            let q = generate(
                &FamilySpec::new(n, Family::RandomTmodal { modes: 2 }).with_seed(1_000 + 5 * s + j),
            )
            .unwrap();
            slate.push(q);
        }
        let w = select_hypothesis(&slate, &p, eps, 0.1, &C, seed::derive(s, 9)).unwrap();
        let tv: Vec<f64> = slate.iter().map(|h| tv_distance(&p, h).unwrap()).collect();
        let best = tv.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(tv[w] <= 10.0 * best + eps, "seed {s}");
    }
}

#[test]
fn generic_toy() {
    let comps = vec![
        Distribution::new(vec![0.0, 0.9, 0.1, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap(),
        Distribution::new(vec![0.0, 0.0, 0.0, 0.0, 0.0, 0.1, 0.9, 0.0]).unwrap(),
    ];
    let p = MixtureSpec::new(comps, vec![0.5, 0.5]).unwrap();
    let cfg = GenericConfig {
        k: 2,
        sample_size: 10,
        min_part: 1,
        selection_samples: None,
    };
    let ok = successes(&p, 20, 0.25, |s| {
        generic_mixture_learn(&p, &EmpiricalLearner, &cfg, 0.2, 0.1, &C, s).unwrap()
    });
    assert!(ok >= 18, "{ok}/20");
    assert_eq!(SampleSource::domain_size(&p), 8);
}
