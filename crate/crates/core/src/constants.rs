use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Constants hidden in the asymptotic bounds. The defaults are empirical
/// calibrations; every budget and bound in the crate reads them from here.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Constants {
    /// Sample-size multiplier in every `⌈C₁(·)/ε²⌉` budget.
    pub c1: f64,
    /// Log-concave threshold divisor: `τ = ε / (C₂ ln(2/ε))`.
    pub c2: f64,
    /// MHR interval-count factor: `|P| ≤ C₃ ln(n/ε)/ε`.
    pub c3: f64,
    /// Monotone (Birgé) interval-count factor: `|P| ≤ C₄ ln(n)/ε`.
    pub c4: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Constants {
            c1: 4.0,
            c2: 4.0,
            c3: 64.0,
            c4: 8.0,
        }
    }
}

impl Constants {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("c1", self.c1),
            ("c2", self.c2),
            ("c3", self.c3),
            ("c4", self.c4),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::ParameterOutOfRange {
                    name,
                    value,
                    range: "(0, ∞)",
                });
            }
        }
        Ok(())
    }
}

/// `⌈x⌉` for a non-negative budget expression.
pub(crate) fn ceil_u64(x: f64) -> u64 {
    libm::ceil(x) as u64
}
