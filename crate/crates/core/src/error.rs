use thiserror::Error;

/// Errors raised by Hamiltonian builders, evolvers, encoders and decoders.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("dimension {dim} exceeds the cap of {cap} for {what}")]
    DimensionCap { what: &'static str, dim: usize, cap: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("pair-term divisor requires at least 2 sites, got {0}")]
    TooFewSites(usize),

    #[error("qubit index {index} out of range for width {width}")]
    QubitOutOfRange { index: usize, width: usize },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("transition {0} is outside the physical register range")]
    TransitionOutOfRange(String),

    #[error("Pauli string has no non-identity letter")]
    IdentityPauliString,

    #[error("unsupported encoding: {0}")]
    UnsupportedEncoding(String),

    #[error("unphysical register population {population:.3e} above value {max_value}")]
    UnphysicalPopulation { population: f64, max_value: usize },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
}

pub type Result<T> = std::result::Result<T, Error>;
