use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("distance {distance} m is below the minimum separation {d_min} m")]
    TooClose { distance: f64, d_min: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("argument {value} is outside the domain of {function}")]
    Domain { function: &'static str, value: f64 },

    #[error("residual bracket violated: WPT and PU phases use {used} of the slot")]
    BracketViolation { used: f64 },

    #[error("no bracket with a finite residual inside [{lo}, {hi}]")]
    InfeasibleBracket { lo: f64, hi: f64 },

    #[error("grid of resolution {resolution} contains no point meeting the PU rate")]
    EmptyFeasibleGrid { resolution: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
