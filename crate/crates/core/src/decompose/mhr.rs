use alloc::vec::Vec;

use crate::constants::Constants;
use crate::distribution::{Distribution, Pmf};
use crate::error::{check_unit_open, Error, Result};
use crate::families::is_mhr;
use crate::partition::{Interval, IntervalPartition};

use super::right_interval;

/// Output of [`decompose_mhr`], keeping the role of each piece.
#[derive(Debug, Clone, PartialEq)]
pub struct MhrDecomposition {
    pub partition: IntervalPartition,
    /// Rightmost peel at threshold ε/8.
    pub right: Interval,
    /// Second peel; absent when the first one used up the domain.
    pub right_inner: Option<Interval>,
    /// Low-probability prefix before the first point with `p(i) ≥ ε/(4n)`.
    pub left: Option<Interval>,
    /// Near-constant blocks: within each, `p` stays within a factor
    /// `1 + ε/8` of its value at the block's first point.
    pub blocks: Vec<Interval>,
}

impl MhrDecomposition {
    /// `Π p(a_i)/p(a_{i+1})` over the blocks whose successor starts lower,
    /// where `a_{|Q|+1}` is the point right after the last block.
    pub fn decrease_product(&self, p: &Distribution) -> f64 {
        let mut product = 1.0;
        let starts: Vec<usize> = self
            .blocks
            .iter()
            .map(|b| b.start())
            .chain(self.blocks.last().map(|b| b.end() + 1))
            .collect();
        for w in starts.windows(2) {
            let (here, next) = (p.prob(w[0]), p.prob(w[1]));
            if here > next {
                product *= here / next;
            }
        }
        product
    }
}

/// `C₃ ln(n/ε) / ε`.
pub fn mhr_interval_bound(n: usize, epsilon: f64, constants: &Constants) -> f64 {
    constants.c3 * libm::log(n as f64 / epsilon) / epsilon
}

/// Flat decomposition of an explicitly given MHR distribution; no samples
/// are drawn.
///
/// The result satisfies `d_TV(p, p^flat(P)) ≤ ε`.
pub fn decompose_mhr(p: &Distribution, epsilon: f64) -> Result<MhrDecomposition> {
    check_unit_open("epsilon", epsilon)?;
    if !is_mhr(p) {
        return Err(Error::ClassViolation("MHR"));
    }
    let n = p.n();
    let eta = epsilon / 8.0;
    let probs = p.probs();

    let right = right_interval(p, Interval::raw(1, n), eta)?;
    let mut end = right.start() - 1;
    let right_inner = if end >= 1 {
        let piece = right_interval(p, Interval::raw(1, end), eta)?;
        end = piece.start() - 1;
        Some(piece)
    } else {
        None
    };

    let mut left = None;
    let mut blocks = Vec::new();
    if end >= 1 {
        let threshold = epsilon / (4.0 * n as f64);
        match probs[..end].iter().position(|&x| x >= threshold) {
            None => left = Some(Interval::raw(1, end)),
            Some(first) => {
                let first = first + 1;
                if first > 1 {
                    left = Some(Interval::raw(1, first - 1));
                }
                let mut start = first;
                while start <= end {
                    let base = probs[start - 1];
                    let (hi, lo) = (base * (1.0 + eta), base / (1.0 + eta));
                    let stop = (start + 1..=end).find(|&j| {
                        let x = probs[j - 1];
                        x > hi || x < lo
                    });
                    let block_end = stop.map_or(end, |j| j - 1);
                    blocks.push(Interval::raw(start, block_end));
                    start = block_end + 1;
                }
            }
        }
    }

    let mut pieces = Vec::with_capacity(blocks.len() + 3);
    pieces.extend(left);
    pieces.extend(blocks.iter().copied());
    pieces.extend(right_inner);
    pieces.push(right);
    let partition = IntervalPartition::new(n, pieces)?;
    Ok(MhrDecomposition {
        partition,
        right,
        right_inner,
        left,
        blocks,
    })
}
