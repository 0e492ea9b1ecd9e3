use thiserror::Error;

/// Errors raised by the dominance toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Input data is malformed (too short, non-finite values, ...).
    #[error("invalid input: {0}")]
    Input(String),

    /// A run configuration is inconsistent.
    #[error("configuration error: {0}")]
    Config(String),

    /// The data does not carry enough variation for the requested procedure.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// The asymptotic variance blows up (densities coincide at the crossing point).
    #[error("singular asymptotic variance: {0}")]
    Singular(String),

    /// A numerical routine failed to produce a usable value.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be positive and finite, got {value}")))
    }
}

pub(crate) fn ensure_unit_open(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must lie in (0, 1), got {value}")))
    }
}
