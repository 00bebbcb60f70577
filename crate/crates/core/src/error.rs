use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("schema error: {0}")]
    Schema(String),

    #[error("row {row}: {message}")]
    Row { row: usize, message: String },

    #[error("score {0} outside (-1, 1); use the tanh transform for unbounded scores")]
    ScoreRange(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no misclassified instances for the {0} direction")]
    DirectionUnavailable(crate::rules::Direction),

    #[error("empty dataset")]
    EmptyDataset,

    #[error("{0}")]
    Scenario(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
