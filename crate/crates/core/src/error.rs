//! Error type shared by every module in the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes surfaced by the library.
///
/// `Domain` and `InvalidInput` mark bad inputs (a mathematical precondition
/// violated, or a structurally malformed dataset / flag combination);
/// `NonConvergence` and `Divergent` mark numerical failures of an otherwise
/// well-posed request.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A mathematical precondition was violated (e.g. a non-positive
    /// temperature or an argument outside a function's domain).
    #[error("domain error: {0}")]
    Domain(String),

    /// Structurally invalid input: malformed dataset, inconsistent bounds,
    /// contradictory options.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An iterative routine exhausted its budget before reaching the
    /// requested tolerance.
    #[error("failed to converge: {0}")]
    NonConvergence(String),

    /// The requested quantity does not exist (an integral that provably
    /// diverges for the given parameters).
    #[error("divergent: {0}")]
    Divergent(String),
}

impl Error {
    /// True for the input-side variants (`Domain`, `InvalidInput`).
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Domain(_) | Error::InvalidInput(_))
    }
}
