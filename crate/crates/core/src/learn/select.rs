use alloc::vec;
use alloc::vec::Vec;

use crate::constants::{ceil_u64, Constants};
use crate::distribution::Pmf;
use crate::error::{check_unit_open, Error, Result};
use crate::sampling::{sample, SampleSource};

/// `⌈C₁ (ln N + 1) ln(2/δ) / ε²⌉` samples for a tournament over `N`
/// candidates.
pub fn selection_sample_budget(
    candidates: usize,
    epsilon: f64,
    delta: f64,
    constants: &Constants,
) -> u64 {
    let n = candidates.max(1) as f64;
    ceil_u64(constants.c1 * (libm::log(n) + 1.0) * libm::log(2.0 / delta) / (epsilon * epsilon))
}

/// Round-robin Scheffé tournament judged by `empirical`.
///
/// For a pair `(h_i, h_j)` with `W = {x : h_i(x) > h_j(x)}`, the candidate
/// whose mass on `W` is closer to `empirical(W)` wins; an exact tie goes to
/// the lower index. Returns the index with the most wins, lowest index
/// first among equals.
pub fn scheffe_winner<H: Pmf, E: Pmf + ?Sized>(candidates: &[H], empirical: &E) -> Result<usize> {
    if candidates.is_empty() {
        return Err(Error::NoCandidates);
    }
    let n = empirical.domain_size();
    for h in candidates {
        if h.domain_size() != n {
            return Err(Error::DomainMismatch {
                left: h.domain_size(),
                right: n,
            });
        }
    }
    if candidates.len() == 1 {
        return Ok(0);
    }
    let dense: Vec<_> = candidates.iter().map(|h| h.dense()).collect();
    let q = empirical.dense();
    let mut wins = vec![0u32; candidates.len()];
    for i in 0..dense.len() {
        for j in i + 1..dense.len() {
            let (hi, hj) = (&dense[i], &dense[j]);
            let (mut mi, mut mj, mut mq) = (0.0, 0.0, 0.0);
            for x in 0..n {
                if hi[x] > hj[x] {
                    mi += hi[x];
                    mj += hj[x];
                    mq += q[x];
                }
            }
            if libm::fabs(mj - mq) < libm::fabs(mi - mq) {
                wins[j] += 1;
            } else {
                wins[i] += 1;
            }
        }
    }
    let mut best = 0;
    for (i, &w) in wins.iter().enumerate() {
        if w > wins[best] {
            best = i;
        }
    }
    Ok(best)
}

/// Draws [`selection_sample_budget`] samples and runs [`scheffe_winner`].
pub fn select_hypothesis<H: Pmf, S: SampleSource + ?Sized>(
    candidates: &[H],
    source: &S,
    epsilon: f64,
    delta: f64,
    constants: &Constants,
    seed: u64,
) -> Result<usize> {
    check_unit_open("epsilon", epsilon)?;
    check_unit_open("delta", delta)?;
    constants.validate()?;
    if candidates.is_empty() {
        return Err(Error::NoCandidates);
    }
    if candidates.len() == 1 {
        return Ok(0);
    }
    let m = selection_sample_budget(candidates.len(), epsilon, delta, constants);
    let empirical = sample(source, m, seed)?;
    scheffe_winner(candidates, &empirical)
}
