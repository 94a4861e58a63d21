use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulation order {0} is not a supported square QAM order")]
    UnsupportedOrder(usize),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("matrix is not positive semidefinite: eigenvalue {eigenvalue:e} below {threshold:e}")]
    NotPositiveSemidefinite { eigenvalue: f64, threshold: f64 },

    #[error("operator dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("square-root measurement requires equal priors")]
    UnequalPriors,

    #[error("observed outcome has zero probability under every hypothesis")]
    DegenerateEvidence,

    #[error("Helstrom iteration did not converge in {iterations} iterations (gap {gap:e}, p_err {p_err})")]
    NotConverged {
        iterations: usize,
        gap: f64,
        p_err: f64,
        best: Box<crate::bounds::HelstromSolution>,
    },

    #[error("exact enumeration needs {paths} outcome paths, budget is {budget}")]
    PathBudgetExceeded { paths: u128, budget: u128 },

    #[error("exact enumeration requires a finite-resolution detector")]
    InfiniteResolution,

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
