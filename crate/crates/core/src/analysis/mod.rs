//! Lyapunov functions, hyperparameter bounds, convergence diagnostics and
//! numerical oracles.
//!
//! Everything here reads traces and never feeds back into the tuners: the
//! Lyapunov values are recomputed from logged states rather than taken from
//! the run.

mod bounds;
mod lyapunov;
mod oracles;
mod report;
mod stability;

pub use bounds::{max_gamma, validate_hyperparams, Condition, GammaBound, ValidationReport};
pub use lyapunov::{
    check_lyapunov_decrease, exponential_envelope_check, lyapunov_samples, lyapunov_value,
    DecreaseMode, EnvelopeReport, LyapunovSample, LyapunovViolation,
};
pub use oracles::{
    finite_diff_gradient_check, iterations_to_epsilon, iterations_to_gap, solve_optimum,
};
pub use report::{render_findings, Finding};
pub use stability::{classify, Stability};
