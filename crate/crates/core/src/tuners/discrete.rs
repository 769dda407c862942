use crate::error::Result;
use crate::loss::{Objective, RegressorSample};
use crate::vector::ParamVector;

use super::{diverged, overflow_as_divergence, require_positive, HyperParams, TunerState};

/// Intermediate quantities of one HT iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    /// `θ̄_k = θ_k − γβ∇L_k(θ_k)/N_k`
    pub theta_bar: ParamVector,
    /// `∇L_k(θ_k)`, unnormalized.
    pub grad_at_theta: ParamVector,
    /// `∇L_k(θ_{k+1})`, unnormalized.
    pub grad_at_theta_next: ParamVector,
    /// `N_k`, evaluated once at `θ_k` and used for both gradients.
    pub normalizer: f64,
}

/// One iteration of the high-order tuner.
///
/// ```text
/// θ̄_k     = θ_k − γβ ∇L_k(θ_k)/N_k
/// θ_{k+1} = θ̄_k − β(θ̄_k − ϑ_k)
/// ϑ_{k+1} = ϑ_k − γ ∇L_k(θ_{k+1})/N_k
/// ```
///
/// Both gradients use the same sample `k` and the same `N_k`. With the
/// quadratic regression loss `N_k = 1 + ‖φ_k‖²`, which is the linear
/// regression variant of the tuner.
pub fn ht_step<O: Objective + ?Sized>(
    state: &TunerState,
    objective: &O,
    sample: &RegressorSample,
    hp: &HyperParams,
) -> Result<(TunerState, StepRecord)> {
    require_positive("gamma", hp.gamma)?;
    require_positive("beta", hp.beta)?;
    state.theta.check_dim(&state.vartheta)?;

    let first = objective
        .evaluate(&state.theta, sample)
        .map_err(|e| overflow_as_divergence(e, &state.theta))?;
    let normalizer = first.normalizer;
    let theta_bar = state
        .theta
        .add_scaled(-hp.gamma * hp.beta / normalizer, &first.gradient);
    let theta = theta_bar.lerp(&state.vartheta, hp.beta);
    if !theta.is_finite() {
        return Err(diverged(&state.theta));
    }

    let second = objective
        .evaluate(&theta, sample)
        .map_err(|e| overflow_as_divergence(e, &state.theta))?;
    let vartheta = state
        .vartheta
        .add_scaled(-hp.gamma / normalizer, &second.gradient);
    if !vartheta.is_finite() {
        return Err(diverged(&state.theta));
    }

    Ok((
        TunerState { theta, vartheta },
        StepRecord {
            theta_bar,
            grad_at_theta: first.gradient,
            grad_at_theta_next: second.gradient,
            normalizer,
        },
    ))
}
