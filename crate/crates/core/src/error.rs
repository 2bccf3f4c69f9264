use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A state or operator failed its construction invariants
    /// (normalization, hermiticity, trace, positivity).
    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Projecting onto an outcome whose probability is numerically zero.
    #[error("degenerate projection: outcome probability {probability:.3e} is below {floor:.0e}")]
    DegenerateProjection { probability: f64, floor: f64 },

    /// An operation that requires a positive-semidefinite matrix was handed
    /// one with a genuinely negative eigenvalue.
    #[error("non-physical density matrix: {0}")]
    NonPhysical(String),

    #[error("singular system: {0}")]
    SingularSystem(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A tomography set with missing or duplicated settings.
    #[error("incomplete tomography set: {0}")]
    IncompleteSet(String),

    #[error("monte carlo trial {trial} failed: {source}")]
    TrialFailed {
        trial: usize,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
