//! Error type shared by all modules.

use num::BigRational;

/// Errors surfaced by the library.
///
/// `Domain` covers invalid inputs (mismatched lengths, out-of-range indices),
/// `Resource` covers exceeded enumeration budgets, `Pole` reports evaluation
/// of a rational function at a root of its reduced denominator, and
/// `Internal` reports a violated invariant that callers can never trigger
/// with valid inputs.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain: {0}")]
    Domain(String),
    #[error("resource: {0}")]
    Resource(String),
    #[error("pole: reduced denominator vanishes at z = {0}")]
    Pole(BigRational),
    #[error("internal: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable code for CLI output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain(_) => "E_DOMAIN",
            Error::Resource(_) => "E_RESOURCE",
            Error::Pole(_) => "E_POLE",
            Error::Internal(_) => "E_INTERNAL",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
