use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the solver, its configuration layer and the output writers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{key}`: {reason}")]
    InvalidParameter { key: String, reason: String },

    #[error("malformed topography: {0}")]
    Topography(String),

    #[error("overlapping {field} boxes: #{first} and #{second}")]
    OverlappingBoxes {
        field: &'static str,
        first: usize,
        second: usize,
    },

    #[error("unsupported moment order {0} (expected 0, 1 or 2)")]
    UnsupportedMomentOrder(u32),

    #[error("invalid moment bounds [{lower}, {upper}]")]
    InvalidBounds { lower: f64, upper: f64 },

    #[error("nothing to evolve at t = {time}: every cell is dry and no source is active")]
    NothingToEvolve { time: f64 },

    #[error("non-finite value in cell {cell} at t = {time} (h = {height}, q = {discharge})")]
    NonFinite {
        time: f64,
        cell: usize,
        height: f64,
        discharge: f64,
    },

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("config parse error: {0}")]
    Parse(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            key: key.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
