use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// Every variant carries a human-readable detail string; [`Error::kind`]
/// gives a stable machine-readable tag used in JSON output.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("no convergence: {0}")]
    Convergence(String),
    #[error("series diverges: {0}")]
    Divergence(String),
    #[error("wrong pole order: {0}")]
    WrongOrder(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("singular parameter: {0}")]
    Singular(String),
    #[error("evaluation budget of {0} function evaluations exhausted")]
    Budget(u64),
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Pole(_) => "pole",
            Error::Range(_) => "range",
            Error::Convergence(_) => "convergence",
            Error::Divergence(_) => "divergence",
            Error::WrongOrder(_) => "wrong-order",
            Error::Precondition(_) => "precondition",
            Error::Singular(_) => "singular",
            Error::Budget(_) => "budget",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
