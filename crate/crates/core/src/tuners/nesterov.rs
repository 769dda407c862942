use crate::error::{Error, Result};
use crate::loss::{Objective, RegressorSample};
use crate::math;

use super::{diverged, overflow_as_divergence, require_positive, HyperParams, NesterovState};

/// One step of Nesterov's method for strongly convex functions:
///
/// ```text
/// θ_{k+1} = ν_k − ᾱ ∇f(ν_k)
/// ν_{k+1} = (1 + β̄) θ_{k+1} − β̄ θ_k
/// ```
///
/// The gradient is the loss gradient as reported, without normalization.
pub fn nesterov_step<O: Objective + ?Sized>(
    state: &NesterovState,
    objective: &O,
    sample: &RegressorSample,
    hp: &HyperParams,
) -> Result<NesterovState> {
    require_positive("alpha_bar", hp.alpha_bar)?;
    if !(0.0..1.0).contains(&hp.beta_bar) {
        return Err(Error::invalid(
            "beta_bar",
            alloc::format!("must lie in [0, 1), got {}", hp.beta_bar),
        ));
    }
    state.theta.check_dim(&state.nu)?;
    let eval = objective
        .evaluate(&state.nu, sample)
        .map_err(|e| overflow_as_divergence(e, &state.theta))?;
    let theta = state.nu.add_scaled(-hp.alpha_bar, &eval.gradient);
    let nu = theta.zip_with(&state.theta, |next, prev| {
        (1.0 + hp.beta_bar) * next - hp.beta_bar * prev
    });
    if !(theta.is_finite() && nu.is_finite()) {
        return Err(diverged(&state.theta));
    }
    Ok(NesterovState { theta, nu })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NesterovGains {
    pub alpha_bar: f64,
    pub beta_bar: f64,
    /// Condition number `L̄/μ`.
    pub kappa: f64,
}

/// `ᾱ = 1/L̄`, `κ = L̄/μ`, `β̄ = (√κ − 1)/(√κ + 1)`.
pub fn nesterov_gains(l_bar: f64, mu: f64) -> Result<NesterovGains> {
    require_positive("mu", mu)?;
    require_positive("l_bar", l_bar)?;
    if l_bar < mu {
        return Err(Error::invalid(
            "l_bar",
            alloc::format!("smoothness {l_bar} is below strong convexity {mu}"),
        ));
    }
    let kappa = l_bar / mu;
    let root = math::sqrt(kappa);
    Ok(NesterovGains {
        alpha_bar: 1.0 / l_bar,
        beta_bar: (root - 1.0) / (root + 1.0),
        kappa,
    })
}
