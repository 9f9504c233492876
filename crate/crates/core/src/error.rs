use thiserror::Error;

use crate::circuit::GateKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("gate kind {0} is not supported by {1}")]
    UnsupportedGate(GateKind, &'static str),

    #[error("invalid circuit at {path}: {reason}")]
    InvalidCircuit { path: String, reason: String },

    #[error("frame conjugation through {0} does not factorize into single-qubit Cliffords")]
    NonLocalCorrection(String),

    #[error("no acceptable single-qubit Clifford frame for {gate} in cycle {cycle}")]
    EmptyAcceptanceSubgroup { gate: GateKind, cycle: usize },

    #[error("{what} needs at most {limit} qubits, got {n}")]
    TooLarge { what: &'static str, n: usize, limit: usize },

    #[error("circuit contains a measurement; {0} requires a unitary circuit")]
    MeasurementPresent(&'static str),

    #[error("invalid Ising model: {0}")]
    InvalidModel(String),

    #[error("dimension mismatch: expected {expected} qubits, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid noise model: {0}")]
    InvalidNoise(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown {kind} '{name}' (known: {known})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        known: String,
    },

    #[error("grid point {index} (gamma={gamma}, beta={beta}): {source}")]
    GridPoint {
        index: usize,
        gamma: f64,
        beta: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("landscape has no per-compilation shot counts; run a sampled or noisy backend")]
    MissingCounts,

    #[error("landscape grid is empty")]
    EmptyGrid,

    #[error("landscape grids differ: {0}")]
    GridMismatch(String),

    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid_circuit(path: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidCircuit {
            path: path.into(),
            reason: reason.into(),
        }
    }

    /// True for errors caused by bad user input rather than a failure during execution.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidCircuit { .. }
                | Error::InvalidModel(_)
                | Error::InvalidNoise(_)
                | Error::InvalidConfig(_)
                | Error::UnknownStrategy { .. }
                | Error::Parse { .. }
                | Error::Json(_)
                | Error::TooLarge { .. }
                | Error::DimensionMismatch { .. }
        )
    }
}
