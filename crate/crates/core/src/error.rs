use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{n_qubits} qubits exceeds the dense-matrix limit of {max}")]
    Capacity { n_qubits: usize, max: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("mode index {mode} out of range for {n_modes} modes")]
    InvalidMode { mode: usize, n_modes: usize },
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),
    #[error("cannot exponentiate the identity string as a gate sequence")]
    IdentityString,
    #[error("terms {first} ({first_label}) and {second} ({second_label}) do not commute")]
    NonCommuting {
        first: usize,
        second: usize,
        first_label: String,
        second_label: String,
    },
    #[error("operator is not Hermitian (max deviation {0:e})")]
    NonHermitian(f64),
    #[error("invalid gate: {0}")]
    InvalidGate(String),
    #[error("qubit {qubit} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },
    #[error("codeword weight {0:e} too small to renormalize")]
    DegenerateProjection(f64),
    #[error("post-selection discarded all weight")]
    DegeneratePostSelection,
    #[error("shot count must be positive")]
    ZeroShots,
    #[error("readout calibration for qubit {qubit} is singular (p01 + p10 = {sum})")]
    SingularCalibration { qubit: usize, sum: f64 },
    #[error("invalid probability {name} = {value}")]
    InvalidProbability { name: String, value: f64 },
    #[error("invalid physical parameters: {0}")]
    InvalidParams(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
