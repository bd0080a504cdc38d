//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument fell outside the mathematical domain of an operation.
    #[error("domain error in {op}: {msg}")]
    Domain { op: &'static str, msg: String },

    /// The operation is not defined for this entropic index.
    #[error("{op} is not supported for q = {q}")]
    UnsupportedIndex { op: &'static str, q: String },

    /// A stated precondition does not hold (e.g. a clipped q-exponential
    /// branch where the unclipped branch is required).
    #[error("precondition violated in {op}: {msg}")]
    Precondition { op: &'static str, msg: String },

    /// Array shapes do not agree.
    #[error("shape mismatch in {op}: expected {expected}, got {got}")]
    Shape {
        op: &'static str,
        expected: String,
        got: String,
    },

    /// A structural invariant of a domain type is violated.
    #[error("invariant violated: {0}")]
    Invariant(String),

    /// A file could not be parsed; carries enough context to name the
    /// offending field.
    #[error("parse error{}: {msg}", context_suffix(.context))]
    Parse { msg: String, context: String },

    /// The iterative simplex maximizer did not reach its tolerance.
    #[error("simplex optimizer failed to converge after {iterations} iterations (residual {residual:.3e}, tol {tol:.3e})")]
    OptimizerNonConvergence {
        iterations: usize,
        residual: f64,
        tol: f64,
    },

    /// A solver iterate exceeded the configured divergence bound.
    #[error("solver diverged at iteration {iteration}: |Q|_inf = {norm:.6e} exceeds bound {bound:.6e}")]
    Divergence {
        iteration: usize,
        norm: f64,
        bound: f64,
    },

    /// The linear system of an exact policy evaluation was singular. This
    /// cannot happen for gamma < 1 and a row-stochastic transition model;
    /// it signals a broken input.
    #[error("singular linear system in exact policy evaluation (pivot {pivot:.3e} at row {row})")]
    Singular { pivot: f64, row: usize },

    /// Two routes that must agree (closed form vs. optimizer) disagreed.
    #[error("internal cross-check failed in {op}: {msg}")]
    CrossCheck { op: &'static str, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

fn context_suffix(context: &str) -> String {
    if context.is_empty() {
        String::new()
    } else {
        format!(" ({context})")
    }
}

impl Error {
    pub(crate) fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain { op, msg: msg.into() }
    }

    pub(crate) fn precondition(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Precondition { op, msg: msg.into() }
    }

    pub(crate) fn shape(op: &'static str, expected: impl Into<String>, got: impl Into<String>) -> Self {
        Error::Shape {
            op,
            expected: expected.into(),
            got: got.into(),
        }
    }

    pub(crate) fn parse(msg: impl Into<String>, context: impl Into<String>) -> Self {
        Error::Parse {
            msg: msg.into(),
            context: context.into(),
        }
    }
}
