use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("config line {line}: {reason}")]
    Config { line: usize, reason: String },

    #[error("unknown config key `{key}` on line {line}")]
    UnknownKey { line: usize, key: String },

    #[error(
        "could not place node {node} at least {d_min} m from the others after {attempts} draws"
    )]
    Placement {
        node: usize,
        d_min: f64,
        attempts: usize,
    },

    #[error("{0}")]
    Usage(String),

    #[error("no rows to summarise")]
    EmptyRows,

    #[error(transparent)]
    Core(#[from] wpcr_core::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, ExperimentError>;
