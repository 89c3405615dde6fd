use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("no sign change on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("no convergence after {iterations} iterations (bracket width {width:e})")]
    NoConvergence { iterations: usize, width: f64 },
    #[error("could not bracket root: {0}")]
    BracketFailure(String),
    #[error("insufficient modes: truncation error {error:e} exceeds {limit:e}")]
    InsufficientModes { error: f64, limit: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Domain(msg()))
    }
}
