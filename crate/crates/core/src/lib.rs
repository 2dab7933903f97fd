//! Learning discrete distributions over `[n] = {1, …, n}` with few-bin,
//! variable-width histograms.
//!
//! A distribution is *(ε, t)-flat* when some partition of `[n]` into at most
//! `t` intervals changes it by at most ε in total variation once the mass of
//! each interval is spread evenly over it. Mixtures of flat distributions
//! are themselves flat, so a single learner that finds such a partition from
//! samples handles mixtures of log-concave, MHR, unimodal and t-modal
//! distributions alike.
//!
//! The crate is `no_std` (it needs `alloc`) and does no IO; file formats,
//! timing and the command line live in the `flathist` crate.
//!
//! ```
//! use flathist_core::{flatten, tv_distance, Distribution, IntervalPartition};
//!
//! let p = Distribution::new(vec![0.5, 0.1, 0.1, 0.3]).unwrap();
//! let bins = IntervalPartition::from_bounds(4, &[(1, 2), (3, 4)]).unwrap();
//! let h = flatten(&p, &bins).unwrap();
//! assert!((tv_distance(&p, &h).unwrap() - 0.3).abs() < 1e-12);
//! ```
#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod constants;
mod distance;
mod distribution;
mod error;
mod flat;
mod mixture;
mod partition;
mod sampling;
pub mod seed;

pub mod decompose;
pub mod families;
pub mod learn;

pub use constants::Constants;
pub use distance::{a_s_distance, kolmogorov_distance, tv_distance};
pub use distribution::{Distribution, EmpiricalDistribution, Pmf};
pub use error::{Error, Result};
pub use flat::{flatten, FlatHypothesis};
pub use mixture::MixtureSpec;
pub use partition::{Interval, IntervalPartition};
pub use sampling::{sample, SampleSource};
