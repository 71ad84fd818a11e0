use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A constructor or operation was called outside its domain.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("could not parse density: {0}")]
    Parse(String),

    /// The eigenvalue bracket did not contain a sign change of the shooting function.
    #[error("failed to bracket eigenvalue {index}: [{lo}, {hi}]")]
    Bracket { index: usize, lo: f64, hi: f64 },

    /// Computed eigenfunction disagrees with Sturm oscillation theory,
    /// which signals an under-resolved integration.
    #[error("inconsistent eigenfunction {index}: {detail}")]
    Consistency { index: usize, detail: String },

    #[error("mesh of {mesh} cells is too coarse for {requested} eigenvalues (need at least {required})")]
    Resolution {
        mesh: usize,
        requested: usize,
        required: usize,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
