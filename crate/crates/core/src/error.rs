use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("insufficient sample: {got} observations, at least {min} required")]
    InsufficientSample { got: usize, min: usize },

    /// A simulated path never left its starting point, so its range is zero.
    #[error("degenerate path: range is zero")]
    DegeneratePath,

    #[error("degenerate bar: high equals low")]
    DegenerateBar,

    /// A reflection series did not reach its tail tolerance before the escalation cap.
    #[error("series did not converge: last term {last_term:e} at n = {n_max} exceeds tolerance {tail_tol:e}")]
    SeriesNotConverged {
        n_max: usize,
        last_term: f64,
        tail_tol: f64,
    },

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for caller-side argument errors, false for problems with input data or I/O.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Domain(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
