use thiserror::Error;

/// Errors produced by the simulation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input violates a mathematical precondition (non-unit vector,
    /// time outside `[0, 1]`, non-integer cycle count, ...).
    #[error("domain error: {0}")]
    Domain(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    /// The Hamiltonian produced a non-finite sample.
    #[error("integration error at t = {time}: {message}")]
    Integration { time: f64, message: String },

    /// A trajectory and a Hamiltonian disagree about where the pieces are.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// The evolution does not return to its initial ray.
    #[error("evolution is not cyclic: fidelity {fidelity:.12} (total phase {total_phase:.12} rad)")]
    NonCyclic { fidelity: f64, total_phase: f64 },

    #[error("config error: {0}")]
    Config(String),
}

/// A pulse-sequence syntax error. `token` is the 1-based index of the
/// offending pulse token, `offset` the byte offset in the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at token {token} (byte {offset}): {message}")]
pub struct ParseError {
    pub token: usize,
    pub offset: usize,
    pub message: String,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
