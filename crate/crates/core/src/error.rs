use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The input lies outside the domain (pole, nonpositive integer `v`, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// An iteration or certification step failed to converge.
    #[error("no convergence: {0}")]
    Convergence(String),
}
