use crate::error::{Error, Result};
use crate::loss::{Objective, RegressorSample};
use crate::vector::ParamVector;

use super::{diverged, overflow_as_divergence, require_positive};

/// Which normalizer divides the gradient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Normalization {
    /// `N_k` reported by the loss for the current sample.
    PerSample,
    /// A constant, typically the value at `k = 0` frozen for the whole run.
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GdOptions {
    pub alpha_bar: f64,
    pub normalization: Normalization,
    /// Permit `ᾱ ≥ 2`, outside the stable range of the normalized update.
    pub allow_unsafe_step: bool,
}

impl GdOptions {
    pub fn new(alpha_bar: f64) -> Self {
        GdOptions {
            alpha_bar,
            normalization: Normalization::PerSample,
            allow_unsafe_step: false,
        }
    }
}

/// `θ_{k+1} = θ_k − ᾱ ∇L_k(θ_k)/N_k`, with `0 < ᾱ < 2`.
pub fn normalized_gd_step<O: Objective + ?Sized>(
    theta: &ParamVector,
    objective: &O,
    sample: &RegressorSample,
    alpha_bar: f64,
) -> Result<ParamVector> {
    gd_step(theta, objective, sample, &GdOptions::new(alpha_bar))
}

pub fn gd_step<O: Objective + ?Sized>(
    theta: &ParamVector,
    objective: &O,
    sample: &RegressorSample,
    opts: &GdOptions,
) -> Result<ParamVector> {
    require_positive("alpha_bar", opts.alpha_bar)?;
    if opts.alpha_bar >= 2.0 && !opts.allow_unsafe_step {
        return Err(Error::invalid(
            "alpha_bar",
            alloc::format!(
                "{} is outside (0, 2); set allow_unsafe_step to override",
                opts.alpha_bar
            ),
        ));
    }
    let eval = objective
        .evaluate(theta, sample)
        .map_err(|e| overflow_as_divergence(e, theta))?;
    let n = match opts.normalization {
        Normalization::PerSample => eval.normalizer,
        Normalization::Fixed(n) => {
            require_positive("normalizer", n)?;
            n
        }
    };
    let next = theta.add_scaled(-opts.alpha_bar / n, &eval.gradient);
    if !next.is_finite() {
        return Err(diverged(theta));
    }
    Ok(next)
}
