use crate::distribution::Pmf;
use crate::error::{Error, Result};

fn same_domain<P: Pmf + ?Sized, Q: Pmf + ?Sized>(p: &P, q: &Q) -> Result<()> {
    if p.domain_size() != q.domain_size() {
        return Err(Error::DomainMismatch {
            left: p.domain_size(),
            right: q.domain_size(),
        });
    }
    Ok(())
}

/// `(1/2) Σ |p(i) − q(i)|`.
pub fn tv_distance<P: Pmf + ?Sized, Q: Pmf + ?Sized>(p: &P, q: &Q) -> Result<f64> {
    same_domain(p, q)?;
    let (a, b) = (p.dense(), q.dense());
    let l1: f64 = a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()).sum();
    Ok((0.5 * l1).min(1.0))
}

/// Largest absolute difference of the two CDFs.
pub fn kolmogorov_distance<P: Pmf + ?Sized, Q: Pmf + ?Sized>(p: &P, q: &Q) -> Result<f64> {
    same_domain(p, q)?;
    let (a, b) = (p.dense(), q.dense());
    let mut gap = 0.0f64;
    let mut worst = 0.0f64;
    for (x, y) in a.iter().zip(b.iter()) {
        gap += x - y;
        worst = worst.max(gap.abs());
    }
    Ok(worst.min(1.0))
}

/// `sup |p(A) − q(A)|` over all unions `A` of at most `s` intervals
/// (the empty set included).
///
/// Runs a dynamic program over the signed discrepancy `d = p − q` for the
/// best `≤ s` disjoint runs of `d` and of `−d`; `O(n·s)`.
pub fn a_s_distance<P: Pmf + ?Sized, Q: Pmf + ?Sized>(p: &P, q: &Q, s: usize) -> Result<f64> {
    same_domain(p, q)?;
    if s == 0 {
        return Err(Error::ParameterOutOfRange {
            name: "s",
            value: 0.0,
            range: "[1, ∞)",
        });
    }
    let (a, b) = (p.dense(), q.dense());
    let s = s.min(a.len());
    let d = || a.iter().zip(b.iter()).map(|(x, y)| x - y);
    let up = best_disjoint_runs(d(), s);
    let down = best_disjoint_runs(d().map(|x| -x), s);
    Ok(up.max(down))
}

/// Maximum total of at most `s` disjoint contiguous runs.
fn best_disjoint_runs(values: impl Iterator<Item = f64>, s: usize) -> f64 {
    // open[j]: best total with j runs, the j-th ending at the current point.
    // done[j]: best total with at most j runs so far.
    let mut open = alloc::vec![f64::NEG_INFINITY; s + 1];
    let mut done = alloc::vec![0.0f64; s + 1];
    for x in values {
        for j in (1..=s).rev() {
            open[j] = open[j].max(done[j - 1]) + x;
            done[j] = done[j].max(open[j]);
        }
    }
    done[s]
}
