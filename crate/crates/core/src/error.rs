//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A gamma function or Pochhammer denominator was evaluated at a pole.
    #[error("pole: {0}")]
    Pole(String),
    /// Arguments outside an operation's domain.
    #[error("domain: {0}")]
    Domain(String),
    /// A series that must terminate does not.
    #[error("non-terminating series: {0}")]
    NonTerminating(String),
    /// A convergence certificate could not be established.
    #[error("convergence: {0}")]
    Convergence(String),
    /// Parameter outside the supported catalog.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
