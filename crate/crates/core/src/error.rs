use thiserror::Error;

/// Errors raised by the numerical kernel, state constructors, measures and relations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NonHermitianInput(f64),

    #[error("Jacobi eigensolver did not converge within {0} sweeps")]
    ConvergenceFailure(usize),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("epsilon must lie in [0, 1], got {0}")]
    InvalidEpsilon(f64),

    #[error("vector is not normalized (norm {0})")]
    NonUnitVector(f64),

    #[error("Bloch vector length {0} exceeds 1")]
    BlochNormExceeded(f64),

    #[error("rank must satisfy 1 <= rank <= {dim}, got {rank}")]
    InvalidRank { rank: usize, dim: usize },

    #[error("dimension {0} is not prime")]
    NonPrimeDimension(usize),

    #[error("malformed probability distribution in row {row}: {reason}")]
    MalformedDistribution { row: usize, reason: String },

    #[error("statistics are inconsistent with any state (min eigenvalue {0:e})")]
    InconsistentStatistics(f64),

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("invalid dimension {0}")]
    InvalidDimension(usize),

    #[error("operation requires a qubit, got dimension {0}")]
    NotQubit(usize),

    #[error("relation {id} not applicable: {reason}")]
    NotApplicable { id: String, reason: String },

    #[error("at least {min} samples required, got {found}")]
    TooFewSamples { min: usize, found: usize },

    #[error("not a density operator: {0}")]
    InvalidState(String),
}

pub type Result<T> = std::result::Result<T, Error>;
