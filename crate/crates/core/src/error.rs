use thiserror::Error;

/// Errors raised by state construction and the analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("probabilities sum to {0}, expected 1")]
    NotNormalized(f64),

    #[error("negative probability {value} at index {index}")]
    NegativeProbability { index: usize, value: f64 },

    #[error("energy levels must be non-negative and non-decreasing (offending index {0})")]
    InvalidSpectrum(usize),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("dimension {0} is too small (need at least {1})")]
    DimensionTooSmall(usize, usize),

    #[error("spectrum is degenerate; this operation requires strictly increasing levels")]
    DegenerateSpectrum,

    #[error("levels {0} and {1} are degenerate but carry unequal populations")]
    UnstableDegeneracy(usize, usize),

    #[error("charger spectrum must be the unit ladder (0, 1, ..., d-1)")]
    NotLadder,

    #[error("battery gap must be 1 to resonate with the unit ladder (got {0})")]
    GapMismatch(f64),

    #[error("{0} is not passive")]
    NotPassive(&'static str),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("problem size {size} exceeds the cap {cap}")]
    TooLarge { size: u128, cap: u128 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for errors that describe malformed input data rather than a
    /// violated precondition of an analysis.
    pub fn is_malformed_input(&self) -> bool {
        matches!(
            self,
            Error::NotNormalized(_)
                | Error::NegativeProbability { .. }
                | Error::InvalidSpectrum(_)
                | Error::InvalidArgument(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
