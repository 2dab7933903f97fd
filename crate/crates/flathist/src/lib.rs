//! IO, experiment harness and command-line front end for
//! [`flathist_core`].
//!
//! The `flathist` binary exposes `generate`, `decompose`, `learn`, `eval`
//! and `experiment` subcommands; this library holds everything they share.

mod error;
pub mod harness;
pub mod io;
mod target;

pub use error::{Error, Result};
pub use target::Target;
