use crate::error::{Error, Result};
use crate::loss::{Objective, RegressorSample};
use crate::vector::ParamVector;

use super::{overflow_as_divergence, require_positive, HyperParams, TunerState};

/// Right-hand side of the continuous-time tuner, returned as `(θ̇, ϑ̇)`:
///
/// ```text
/// ϑ̇ = −γ ∇L(θ)/N(θ)
/// θ̇ = −β (θ − ϑ)
/// ```
pub fn ht_continuous_rhs<O: Objective + ?Sized>(
    state: &TunerState,
    objective: &O,
    sample: &RegressorSample,
    hp: &HyperParams,
) -> Result<(ParamVector, ParamVector)> {
    let eval = objective
        .evaluate(&state.theta, sample)
        .map_err(|e| overflow_as_divergence(e, &state.theta))?;
    let d_vartheta = eval.gradient.scale(-hp.gamma / eval.normalizer);
    let d_theta = state
        .theta
        .zip_with(&state.vartheta, |t, v| -hp.beta * (t - v));
    Ok((d_theta, d_vartheta))
}

/// Classical fourth-order Runge-Kutta step of size `h`, holding the sample
/// fixed across the stages.
pub fn rk4_step<O: Objective + ?Sized>(
    state: &TunerState,
    objective: &O,
    sample: &RegressorSample,
    hp: &HyperParams,
    h: f64,
) -> Result<TunerState> {
    let shifted = |dt: f64, k: &(ParamVector, ParamVector)| TunerState {
        theta: state.theta.add_scaled(dt, &k.0),
        vartheta: state.vartheta.add_scaled(dt, &k.1),
    };
    let k1 = ht_continuous_rhs(state, objective, sample, hp)?;
    let k2 = ht_continuous_rhs(&shifted(h / 2.0, &k1), objective, sample, hp)?;
    let k3 = ht_continuous_rhs(&shifted(h / 2.0, &k2), objective, sample, hp)?;
    let k4 = ht_continuous_rhs(&shifted(h, &k3), objective, sample, hp)?;
    let combine = |a: &ParamVector, b: &ParamVector, c: &ParamVector, d: &ParamVector| {
        let mut out = a.as_slice().to_vec();
        for (i, o) in out.iter_mut().enumerate() {
            *o = (*o + 2.0 * b[i] + 2.0 * c[i] + d[i]) * (h / 6.0);
        }
        ParamVector::from_raw(out)
    };
    let next = TunerState {
        theta: state.theta.add(&combine(&k1.0, &k2.0, &k3.0, &k4.0)),
        vartheta: state.vartheta.add(&combine(&k1.1, &k2.1, &k3.1, &k4.1)),
    };
    if !next.is_finite() {
        return Err(super::diverged(&state.theta));
    }
    Ok(next)
}

/// State handed to the observer after each accepted step (and once at `t = 0`).
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousStep<'a> {
    pub step: usize,
    pub time: f64,
    pub state: &'a TunerState,
}

/// Integrates from `t = 0` to `t_end` with fixed step `h`. The sample for a
/// step starting at time `t` comes from `sample_at(t)`.
///
/// The step count is `round(t_end / h)`, so `t_end` should be a multiple of `h`.
pub fn integrate<O, S, F>(
    initial: &TunerState,
    objective: &O,
    mut sample_at: S,
    hp: &HyperParams,
    t_end: f64,
    h: f64,
    mut observer: F,
) -> Result<TunerState>
where
    O: Objective + ?Sized,
    S: FnMut(f64) -> Result<RegressorSample>,
    F: FnMut(&ContinuousStep<'_>),
{
    require_positive("h", h)?;
    require_positive("gamma", hp.gamma)?;
    require_positive("beta", hp.beta)?;
    if !(t_end.is_finite() && t_end >= 0.0) {
        return Err(Error::invalid(
            "t_end",
            alloc::format!("must be non-negative, got {t_end}"),
        ));
    }
    initial.theta.check_dim(&initial.vartheta)?;
    let steps = crate::math::round(t_end / h) as usize;
    let mut state = initial.clone();
    observer(&ContinuousStep {
        step: 0,
        time: 0.0,
        state: &state,
    });
    for i in 0..steps {
        let t = i as f64 * h;
        let sample = sample_at(t)?;
        state = rk4_step(&state, objective, &sample, hp, h).map_err(|e| e.at_time(t))?;
        observer(&ContinuousStep {
            step: i + 1,
            time: (i + 1) as f64 * h,
            state: &state,
        });
    }
    Ok(state)
}
