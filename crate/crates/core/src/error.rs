use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the range where the routine is defined or accurate.
    #[error("{what} out of range: {detail}")]
    Range { what: &'static str, detail: String },

    /// A grid is too coarse for the oscillation or cutoff scale it must carry.
    #[error("under-resolved grid: {detail}")]
    Resolution { detail: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("invalid parameter `{name}`: {constraint}")]
    Invalid { name: &'static str, constraint: String },

    #[error("{what} did not converge (achieved error estimate {achieved:.3e})")]
    NonConvergence { what: &'static str, achieved: f64 },

    /// The Hamiltonian matrix has an eigenvalue at zero.
    #[error("degenerate quadratic form: eigenvalue of modulus {modulus:.3e} at zero")]
    Degenerate { modulus: f64 },

    #[error("empty ladder: {0}")]
    EmptyLadder(String),

    #[error("configuration error in `{field}`: {constraint}")]
    Config { field: String, constraint: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serialization(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, constraint: impl Into<String>) -> Self {
        Error::Invalid {
            name,
            constraint: constraint.into(),
        }
    }

    pub(crate) fn range(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Range {
            what,
            detail: detail.into(),
        }
    }

    pub(crate) fn resolution(detail: impl Into<String>) -> Self {
        Error::Resolution {
            detail: detail.into(),
        }
    }
}
