use alloc::string::String;
use core::fmt;

use crate::vector::ParamVector;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two vectors (or a vector and a sample) disagree on dimension.
    Dimension {
        expected: usize,
        found: usize,
    },
    /// A loss evaluation produced a non-finite value at `theta`.
    Overflow {
        theta: ParamVector,
    },
    /// The sample kind does not belong to the loss family.
    SampleMismatch {
        family: &'static str,
        sample: &'static str,
    },
    InvalidParameter {
        name: &'static str,
        reason: String,
    },
    /// An update left the finite range. `last_theta` is the last finite iterate.
    Diverged {
        iteration: Option<usize>,
        time: Option<f64>,
        last_theta: ParamVector,
    },
    UnknownOptimum,
    Precondition(String),
    NoConvergence {
        iterations: usize,
        residual: f64,
    },
    OutOfRange {
        index: usize,
        horizon: usize,
    },
    Config(String),
    UnknownPreset(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Stamp a divergence error with the iteration it happened at.
    pub fn at_iteration(self, k: usize) -> Self {
        match self {
            Error::Diverged {
                time, last_theta, ..
            } => Error::Diverged {
                iteration: Some(k),
                time,
                last_theta,
            },
            other => other,
        }
    }

    pub fn at_time(self, t: f64) -> Self {
        match self {
            Error::Diverged {
                iteration,
                last_theta,
                ..
            } => Error::Diverged {
                iteration,
                time: Some(t),
                last_theta,
            },
            other => other,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Dimension { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::Overflow { theta } => write!(f, "loss overflowed at theta={theta}"),
            Error::SampleMismatch { family, sample } => {
                write!(f, "{sample} sample cannot drive a {family} loss")
            }
            Error::InvalidParameter { name, reason } => {
                write!(f, "invalid parameter {name}: {reason}")
            }
            Error::Diverged {
                iteration,
                time,
                last_theta,
            } => {
                write!(f, "update diverged")?;
                if let Some(k) = iteration {
                    write!(f, " at iteration {k}")?;
                }
                if let Some(t) = time {
                    write!(f, " at t={t}")?;
                }
                write!(f, "; last finite theta={last_theta}")
            }
            Error::UnknownOptimum => write!(f, "optimum is unknown and could not be computed"),
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::NoConvergence {
                iterations,
                residual,
            } => write!(
                f,
                "no convergence after {iterations} iterations (residual {residual:e})"
            ),
            Error::OutOfRange { index, horizon } => {
                write!(f, "index {index} outside schedule horizon {horizon}")
            }
            Error::Config(msg) => write!(f, "invalid config: {msg}"),
            Error::UnknownPreset(name) => write!(f, "unknown preset `{name}`"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
