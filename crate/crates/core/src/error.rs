//! Error taxonomy shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// An argument fell outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation is meaningless at `p = N` (e.g. positive Hardy coupling).
    #[error("degenerate dimension p = N: {0}")]
    DegenerateDimension(String),

    /// A gradient factor `|u'|^(p-2)` degenerated with `p != 2`.
    #[error("degenerate gradient at r = {r}: |u'| = {magnitude:e}")]
    DegenerateGradient { r: f64, magnitude: f64 },

    /// A stated hypothesis of a theorem-backed check failed; carries the first
    /// offending sample when one exists.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The shooting scan found no sign change over the slope range.
    #[error("no bracket: {0}")]
    NoBracket(String),

    /// State magnitude exceeded the representable budget during integration.
    #[error("blow-up at r = {r}: |state| >= {magnitude:e}")]
    Blowup { r: f64, magnitude: f64 },

    /// The adaptive step size underflowed before reaching the target radius.
    #[error("tolerance failure at r = {r}: step size underflow")]
    ToleranceFailure { r: f64 },

    /// A fit window held fewer nodes than the method needs.
    #[error("insufficient window: {got} nodes, need >= {need}")]
    InsufficientWindow { got: usize, need: usize },
}
