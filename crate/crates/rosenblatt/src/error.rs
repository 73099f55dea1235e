use alloc::string::String;
use core::fmt;

/// Errors surfaced by grid construction, operator preconditions and the
/// Monte Carlo harness.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Grid horizon or step count outside its domain.
    InvalidGrid(String),
    /// Hurst index outside the open interval (1/2, 1).
    InvalidHurst(f64),
    /// Fractional order outside the operator's domain.
    InvalidOrder { order: f64, context: &'static str },
    /// Non-finite sample where a finite value is required.
    NonFinite { index: usize, context: &'static str },
    /// Two objects built on different grids were combined.
    GridMismatch,
    /// Input failed an operator precondition (message explains which).
    Precondition(String),
    /// Drift removal hit D_s < 0; the model is not reducible.
    NotReducible { node: usize, discriminant: f64 },
    /// Importance weights degenerated (ESS below the configured floor).
    WeightDegeneracy { ess: f64, paths: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidGrid(msg) => write!(f, "invalid grid: {msg}"),
            Error::InvalidHurst(h) => write!(f, "Hurst index {h} outside (1/2, 1)"),
            Error::InvalidOrder { order, context } => {
                write!(f, "fractional order {order} invalid for {context}")
            }
            Error::NonFinite { index, context } => {
                write!(f, "non-finite value at node {index} in {context}")
            }
            Error::GridMismatch => write!(f, "operands live on different grids"),
            Error::Precondition(msg) => write!(f, "{msg}"),
            Error::NotReducible { node, discriminant } => write!(
                f,
                "model not reducible: D_s = {discriminant} < 0 at node {node}"
            ),
            Error::WeightDegeneracy { ess, paths } => {
                write!(f, "weight degeneracy: ESS {ess:.1} of {paths} paths")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
