use thiserror::Error;

/// Errors raised by the model functions and the configuration loader.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter is outside the domain of the formula it feeds.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// A sweep or optimisation was asked to run over an empty grid.
    #[error("empty grid: {0}")]
    EmptyGrid(&'static str),

    /// No point of the on-fraction grid satisfies the peak-power caps.
    #[error("no feasible on-time in a grid of {grid_len} points")]
    NoFeasiblePoint { grid_len: usize },

    /// The configuration document could not be parsed or validated.
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

/// Returns an error unless `value` is finite and strictly positive.
pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(invalid(name, format!("must be finite and > 0, got {value}")))
    }
}

pub(crate) fn ensure_non_negative(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(invalid(name, format!("must be finite and >= 0, got {value}")))
    }
}
