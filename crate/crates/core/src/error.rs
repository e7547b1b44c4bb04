use thiserror::Error;

/// Errors raised anywhere in the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The discrete input data does not describe a valid one-part profile.
    #[error("invalid profile: {0}")]
    Validation(String),

    /// Arguments outside the range where an operation is defined.
    #[error("parameter out of range: {0}")]
    Range(String),

    /// An evaluation path reached data it is not defined on (e.g. negative leak
    /// in a recursion, non-positive cut weight).
    #[error("outside the domain of this method: {0}")]
    Domain(String),

    /// The requested method does not cover this profile.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Formal series division by a series without invertible constant term.
    #[error("series constant term is not invertible")]
    NonUnitSeries,

    /// Coefficient index at or past the truncation order.
    #[error("coefficient index {index} out of range for truncation order {order}")]
    SeriesIndex { index: usize, order: usize },

    /// Interpolation samples disagree with every polynomial of the requested degree.
    #[error("inconsistent interpolation samples: {0}")]
    InconsistentSamples(String),

    /// Malformed cache or serialized data.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
