//! Update rules: the discrete HT, normalized gradient descent, Nesterov's
//! method and the continuous-time HT.
//!
//! Step functions are pure: they take a state and return the next one.

mod continuous;
mod discrete;
mod gradient_descent;
mod nesterov;

use alloc::vec::Vec;

pub use continuous::{ht_continuous_rhs, integrate, rk4_step, ContinuousStep};
pub use discrete::{ht_step, StepRecord};
pub use gradient_descent::{gd_step, normalized_gd_step, GdOptions, Normalization};
pub use nesterov::{nesterov_gains, nesterov_step, NesterovGains};

use crate::analysis::{validate_hyperparams, ValidationReport};
use crate::error::{Error, Result};
use crate::vector::ParamVector;

/// Which stability theorem the hyperparameters are meant to satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TunerMode {
    /// `0 < β < 1`, `0 < γ ≤ β(2−β)/(8+β)`
    DiscreteSmooth,
    /// `0 < β < 1`, `0 < γ ≤ β(2−β)/(16+β+μ)`
    DiscreteStronglyConvex,
    /// `β > 2γ > 0`
    Continuous,
}

/// What to do when hyperparameters fall outside the proven region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strictness {
    #[default]
    Strict,
    /// Keep going and report the violated conditions. Baseline comparisons
    /// run deliberately outside the stable region.
    Research,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HyperParams {
    pub gamma: f64,
    pub beta: f64,
    pub mu: f64,
    /// Step size of gradient descent and Nesterov's method.
    pub alpha_bar: f64,
    /// Momentum of Nesterov's method.
    pub beta_bar: f64,
    pub mode: TunerMode,
}

impl HyperParams {
    /// HT gains; the baseline gains default to the HT correspondence
    /// `ᾱ = γβ`, `β̄ = 1 − β`.
    pub fn new(gamma: f64, beta: f64, mode: TunerMode) -> Self {
        HyperParams {
            gamma,
            beta,
            mu: 0.0,
            alpha_bar: gamma * beta,
            beta_bar: 1.0 - beta,
            mode,
        }
    }

    pub fn with_mu(mut self, mu: f64) -> Self {
        self.mu = mu;
        self
    }

    pub fn with_alpha_bar(mut self, alpha_bar: f64) -> Self {
        self.alpha_bar = alpha_bar;
        self
    }

    pub fn with_beta_bar(mut self, beta_bar: f64) -> Self {
        self.beta_bar = beta_bar;
        self
    }

    /// Checks the theorem conditions for `self.mode`. In strict mode a failed
    /// condition is an error; in research mode the report is returned as is.
    pub fn check(&self, strictness: Strictness) -> Result<ValidationReport> {
        let report = validate_hyperparams(self);
        if strictness == Strictness::Strict && !report.passed() {
            let failed: Vec<_> = report
                .conditions
                .iter()
                .filter(|c| !c.passed)
                .map(|c| c.inequality.clone())
                .collect();
            return Err(Error::invalid("hyperparams", failed.join("; ")));
        }
        Ok(report)
    }
}

/// HT state `(θ_k, ϑ_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TunerState {
    pub theta: ParamVector,
    pub vartheta: ParamVector,
}

impl TunerState {
    pub fn new(theta: ParamVector, vartheta: ParamVector) -> Result<Self> {
        theta.check_dim(&vartheta)?;
        Ok(TunerState { theta, vartheta })
    }

    /// `ϑ₀ = θ₀`
    pub fn at_rest(theta: ParamVector) -> Self {
        TunerState {
            vartheta: theta.clone(),
            theta,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.theta.is_finite() && self.vartheta.is_finite()
    }
}

/// Nesterov state `(θ_k, ν_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NesterovState {
    pub theta: ParamVector,
    pub nu: ParamVector,
}

impl NesterovState {
    pub fn new(theta: ParamVector, nu: ParamVector) -> Result<Self> {
        theta.check_dim(&nu)?;
        Ok(NesterovState { theta, nu })
    }

    /// `ν₀ = θ₀`
    pub fn at_rest(theta: ParamVector) -> Self {
        NesterovState {
            nu: theta.clone(),
            theta,
        }
    }
}

pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            name,
            alloc::format!("must be positive, got {value}"),
        ))
    }
}

/// Maps a loss overflow into a divergence that keeps the last finite iterate.
pub(crate) fn overflow_as_divergence(err: Error, last: &ParamVector) -> Error {
    match err {
        Error::Overflow { .. } => Error::Diverged {
            iteration: None,
            time: None,
            last_theta: last.clone(),
        },
        other => other,
    }
}

pub(crate) fn diverged(last: &ParamVector) -> Error {
    Error::Diverged {
        iteration: None,
        time: None,
        last_theta: last.clone(),
    }
}
