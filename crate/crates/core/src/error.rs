use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,
    #[error("negative weight {0}")]
    NegativeWeight(String),
    #[error("weights sum to {0}, expected 1")]
    NotNormalized(String),
    #[error("weights sum to zero or less")]
    ZeroSum,
    #[error("invalid dimension {0}")]
    InvalidDimension(usize),
    #[error("k = {k} out of range 1..={max}")]
    KOutOfRange { k: usize, max: usize },
    #[error("q = {0} out of range [0, 1]")]
    QOutOfRange(String),
    #[error("mu = {0} out of range [0, 1]")]
    MuOutOfRange(String),
    #[error("f_nu undefined at nu = {0} for spectra with zero weights")]
    UndefinedForZeroWeights(f64),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("projection solver did not converge after {0} iterations")]
    SolverDidNotConverge(usize),
    #[error("exact volume supports chart dimension <= {max}, got {dim}")]
    DimensionTooLargeForExact { dim: usize, max: usize },
    #[error("invalid region sign vector: {0}")]
    InvalidRegion(String),
    #[error("cannot parse number {0:?}")]
    Parse(String),
}

impl Error {
    /// Solver failures are reported separately from domain errors by front ends.
    pub fn is_solver(&self) -> bool {
        matches!(self, Error::SolverDidNotConverge(_))
    }
}
