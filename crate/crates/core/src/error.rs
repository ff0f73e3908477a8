use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read or write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("orbital index {index} out of range for {n_orb} orbitals")]
    IndexOutOfRange { index: usize, n_orb: usize },

    #[error("{what} violates its symmetry by {deviation:.3e}")]
    Asymmetric { what: &'static str, deviation: f64 },

    #[error("invalid active space: {0}")]
    InvalidActiveSpace(String),

    #[error("invalid host: {0}")]
    InvalidHost(String),

    #[error("ill-conditioned host: orbitals {occupied} and {empty} straddle the Fermi level with gap {gap:.3e}")]
    IllConditionedHost {
        occupied: usize,
        empty: usize,
        gap: f64,
    },

    #[error("screening diverges: 1 - v chi is singular (condition number {condition:.3e})")]
    ScreeningDivergence { condition: f64 },

    #[error("determinant space of dimension {dim} exceeds the limit {limit}")]
    DimensionTooLarge { dim: u128, limit: u128 },

    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:.3e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("qubit count mismatch: {left} vs {right}")]
    QubitMismatch { left: usize, right: usize },

    #[error("{qubits} qubits exceeds the dense limit of {limit}")]
    TooManyQubits { qubits: usize, limit: usize },

    #[error("operator does not commute with Z on tapered qubit {qubit}")]
    SymmetryViolation { qubit: usize },

    #[error("unsupported encoding '{0}' (expected jw, parity or bk)")]
    UnsupportedEncoding(String),

    #[error("ansatz has no surviving generators")]
    EmptyAnsatz,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
