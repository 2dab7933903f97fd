use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain size mismatch: {left} vs {right}")]
    DomainMismatch { left: usize, right: usize },

    #[error("domain size must be positive")]
    EmptyDomain,

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error("invalid interval [{a}, {b}] for domain size {n}")]
    InvalidInterval { a: usize, b: usize, n: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("parameter {name} = {value} out of range {range}")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("distribution is not {0}")]
    ClassViolation(&'static str),

    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error("scale limits exceeded: {0}")]
    ScaleLimit(String),

    #[error("empty candidate list")]
    NoCandidates,
}

/// Checks `0 < value < 1`.
pub(crate) fn check_unit_open(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange {
            name,
            value,
            range: "(0, 1)",
        })
    }
}
