//! Synthetic distribution families and the structural checkers that gate
//! them: log-concavity, monotone hazard rate, and modality.

mod checks;
mod generate;

pub use checks::{hazard_rates, is_log_concave, is_mhr, modality};
pub use generate::{generate, generate_mixture, Family, FamilySpec};
