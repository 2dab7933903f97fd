use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Binomial, Distribution as _};

use crate::distribution::{Distribution, EmpiricalDistribution};
use crate::error::{Error, Result};
use crate::mixture::MixtureSpec;
use crate::seed::{self, MIXTURE_CHOICE_STREAM};

/// Something the learners can draw i.i.d. samples from.
///
/// Draws are a deterministic function of `(self, m, seed)`.
pub trait SampleSource {
    fn domain_size(&self) -> usize;

    /// Tallies `m >= 1` draws into counts over `[n]`.
    fn draw_counts(&self, m: u64, seed: u64) -> Vec<u64>;
}

/// Draws `m` samples and returns their empirical distribution.
pub fn sample<S: SampleSource + ?Sized>(
    source: &S,
    m: u64,
    seed: u64,
) -> Result<EmpiricalDistribution> {
    if m == 0 {
        return Err(Error::ParameterOutOfRange {
            name: "m",
            value: 0.0,
            range: "[1, ∞)",
        });
    }
    EmpiricalDistribution::from_counts(source.draw_counts(m, seed))
}

/// Tallies `m` i.i.d. draws from `probs` (which need not be normalized)
/// as a multinomial, one conditional binomial per support point.
fn multinomial<R: Rng>(probs: &[f64], m: u64, rng: &mut R, counts: &mut [u64]) {
    let mut tail = alloc::vec![0.0; probs.len() + 1];
    for i in (0..probs.len()).rev() {
        tail[i] = tail[i + 1] + probs[i];
    }
    let last = match probs.iter().rposition(|&x| x > 0.0) {
        Some(i) => i,
        None => return,
    };
    let mut left = m;
    for (i, &p) in probs.iter().enumerate() {
        if left == 0 {
            break;
        }
        if p <= 0.0 {
            continue;
        }
        let c = if i == last {
            left
        } else {
            let r = (p / tail[i]).min(1.0);
            Binomial::new(left, r).expect("ratio in [0, 1]").sample(rng)
        };
        counts[i] += c;
        left -= c;
    }
}

impl SampleSource for Distribution {
    fn domain_size(&self) -> usize {
        self.n()
    }

    fn draw_counts(&self, m: u64, seed: u64) -> Vec<u64> {
        // Stream 0 matches component 0 of a mixture with the same seed.
        let mut rng = seed::rng(seed::derive(seed, 0));
        let mut counts = alloc::vec![0u64; self.n()];
        multinomial(self.probs(), m, &mut rng, &mut counts);
        counts
    }
}

impl SampleSource for MixtureSpec {
    fn domain_size(&self) -> usize {
        self.n()
    }

    /// Splits `m` among the components on the choice stream, then draws
    /// component `i`'s share on stream `i`.
    fn draw_counts(&self, m: u64, seed: u64) -> Vec<u64> {
        let mut per_component = alloc::vec![0u64; self.k()];
        let mut choice_rng = seed::rng(seed::derive(seed, MIXTURE_CHOICE_STREAM));
        multinomial(self.weights(), m, &mut choice_rng, &mut per_component);
        let mut counts = alloc::vec![0u64; self.n()];
        for (i, (c, &mi)) in self.components().iter().zip(&per_component).enumerate() {
            if mi > 0 {
                let mut rng = seed::rng(seed::derive(seed, i as u64));
                multinomial(c.probs(), mi, &mut rng, &mut counts);
            }
        }
        counts
    }
}

impl<S: SampleSource + ?Sized> SampleSource for &S {
    fn domain_size(&self) -> usize {
        (**self).domain_size()
    }

    fn draw_counts(&self, m: u64, seed: u64) -> Vec<u64> {
        (**self).draw_counts(m, seed)
    }
}
