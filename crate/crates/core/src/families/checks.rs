use alloc::vec::Vec;

use crate::distribution::Distribution;

/// Relative slack on the multiplicative inequalities.
const RELATIVE_SLACK: f64 = 1e-15;
/// Allowed decrease between consecutive hazard rates.
const HAZARD_SLACK: f64 = 1e-12;

/// Contiguous support and `p(k)² ≥ p(k−1) p(k+1)` at every interior point
/// of the support.
///
/// The inequality is compared as a ratio of neighbours so that tiny
/// probabilities do not underflow.
pub fn is_log_concave(p: &Distribution) -> bool {
    let probs = p.probs();
    let Some(first) = probs.iter().position(|&x| x > 0.0) else {
        return false;
    };
    let last = probs.iter().rposition(|&x| x > 0.0).unwrap_or(first);
    let support = &probs[first..=last];
    if support.contains(&0.0) {
        return false;
    }
    support.windows(3).all(|w| {
        let rising = w[1] / w[0];
        let next = w[2] / w[1];
        next <= rising * (1.0 + RELATIVE_SLACK)
    })
}

/// Hazard rates `H(i) = p(i) / p([i, n])`, `+∞` where the tail is empty.
pub fn hazard_rates(p: &Distribution) -> Vec<f64> {
    let probs = p.probs();
    let mut out = alloc::vec![0.0; probs.len()];
    let mut tail = 0.0;
    for i in (0..probs.len()).rev() {
        tail += probs[i];
        out[i] = if tail > 0.0 {
            probs[i] / tail
        } else {
            f64::INFINITY
        };
    }
    out
}

/// Whether the hazard rate is non-decreasing.
pub fn is_mhr(p: &Distribution) -> bool {
    hazard_rates(p)
        .windows(2)
        .all(|w| w[1] == f64::INFINITY || w[1] >= w[0] - HAZARD_SLACK)
}

/// Smallest `t` such that `p` is `t`-modal: one more than the number of
/// valleys (a strict decrease later followed by a strict increase) over the
/// support. Flat steps do not change direction.
pub fn modality(p: &Distribution) -> usize {
    let probs = p.probs();
    let Some(first) = probs.iter().position(|&x| x > 0.0) else {
        return 0;
    };
    let last = probs.iter().rposition(|&x| x > 0.0).unwrap_or(first);
    let mut valleys = 0;
    let mut falling = false;
    for w in probs[first..=last].windows(2) {
        if w[1] > w[0] {
            if falling {
                valleys += 1;
            }
            falling = false;
        } else if w[1] < w[0] {
            falling = true;
        }
    }
    valleys + 1
}
