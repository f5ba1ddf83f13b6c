use thiserror::Error;

/// Errors raised by the fitting library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input data violates an ingestion invariant (ordering, finiteness, length).
    #[error("invalid data: {0}")]
    InvalidData(String),
    /// A point or spline lies outside the domain it is evaluated on.
    #[error("domain error: {0}")]
    Domain(String),
    /// An argument is out of its admissible range.
    #[error("invalid argument: {0}")]
    Argument(String),
    /// A fixed-knot problem whose hat basis is not determined by the data.
    #[error("invalid knot configuration: {0}")]
    Configuration(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
