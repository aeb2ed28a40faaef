use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |m - m†| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix has a negative eigenvalue {min_eigenvalue:e}")]
    NegativeSpectrum { min_eigenvalue: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("not a valid density matrix: {0}")]
    NotAState(String),

    #[error("invalid probabilities: {0}")]
    InvalidProbabilities(String),

    #[error("unphysical correlation triple: {0}")]
    Unphysical(String),

    #[error("{name} = {value} is outside [{min}, {max}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("state vector is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("invalid qubit layout: {0}")]
    InvalidLayout(String),

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("invalid counts: {0}")]
    InvalidCounts(String),

    #[error("discord optimizer failed: {0}")]
    OptimizerFailure(String),

    #[error("invalid Kraus channel: {0}")]
    InvalidChannel(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code: 3 for I/O failures, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => 3,
            _ => 2,
        }
    }
}

pub(crate) fn check_range(name: &'static str, value: f64, min: f64, max: f64) -> Result<()> {
    if value.is_finite() && (min..=max).contains(&value) {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name,
            value,
            min,
            max,
        })
    }
}
