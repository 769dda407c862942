use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::trace::{Trace, TraceRecord};
use crate::tuners::{require_positive, HyperParams, TunerState};
use crate::vector::ParamVector;

use super::report::Finding;

/// `V = (‖ϑ − θ*‖² + ‖θ − ϑ‖²)/γ`
pub fn lyapunov_value(state: &TunerState, theta_star: &ParamVector, gamma: f64) -> Result<f64> {
    require_positive("gamma", gamma)?;
    state.theta.check_dim(&state.vartheta)?;
    state.vartheta.check_dim(theta_star)?;
    Ok((state.vartheta.dist_sq(theta_star) + state.theta.dist_sq(&state.vartheta)) / gamma)
}

/// `V_k`, `ΔV_k = V_{k+1} − V_k` and `(L_k(θ_{k+1}) − L_k(θ*))/N_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyapunovSample {
    pub k: usize,
    pub v: f64,
    pub delta_v: f64,
    pub normalized_gap: f64,
}

fn state_of(record: &TraceRecord) -> Result<TunerState> {
    let vartheta = record.aux.clone().ok_or_else(|| {
        Error::Precondition(format!("record k={} carries no second state", record.k))
    })?;
    TunerState::new(record.theta.clone(), vartheta)
}

fn recompute_v(trace: &Trace, theta_star: &ParamVector, gamma: f64) -> Result<Vec<f64>> {
    trace
        .records
        .iter()
        .filter(|r| !r.diverged)
        .map(|r| lyapunov_value(&state_of(r)?, theta_star, gamma))
        .collect()
}

/// Recomputes `V` from the logged states and pairs each step with its
/// normalized loss gap. Record `k+1` carries the loss of sample `k` at
/// `θ_{k+1}` and the step's `N_k`, which is what the decrease bounds use.
pub fn lyapunov_samples(
    trace: &Trace,
    theta_star: &ParamVector,
    gamma: f64,
) -> Result<Vec<LyapunovSample>> {
    let v = recompute_v(trace, theta_star, gamma)?;
    let mut out = Vec::with_capacity(v.len().saturating_sub(1));
    for (i, pair) in v.windows(2).enumerate() {
        let next = &trace.records[i + 1];
        let gap = next.loss_gap.ok_or(Error::UnknownOptimum)?;
        out.push(LyapunovSample {
            k: trace.records[i].k,
            v: pair[0],
            delta_v: pair[1] - pair[0],
            normalized_gap: gap / next.normalizer,
        });
    }
    Ok(out)
}

/// Which decrease bound to check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecreaseMode {
    /// `ΔV_k ≤ 0`
    Plain,
    /// Also `ΔV_k ≤ −(gap_k + γβμV_k/4)/N_k`.
    Strong { beta: f64, mu: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyapunovViolation {
    pub k: usize,
    pub bound: f64,
    pub observed: f64,
}

impl LyapunovViolation {
    pub fn finding(&self) -> Finding {
        Finding {
            iteration: Some(self.k),
            quantity: String::from("delta_v"),
            bound: self.bound,
            observed: self.observed,
            passed: false,
        }
    }
}

/// Iterations where `V` grows. The tolerance is absolute and is scaled by
/// `max(1, V_0)`.
pub fn check_lyapunov_decrease(
    trace: &Trace,
    theta_star: &ParamVector,
    gamma: f64,
    tol: f64,
    mode: DecreaseMode,
) -> Result<Vec<LyapunovViolation>> {
    let samples = lyapunov_samples(trace, theta_star, gamma)?;
    let scale = samples.first().map_or(1.0, |s| s.v.max(1.0));
    let slack = tol * scale;
    let mut violations = Vec::new();
    for (i, s) in samples.iter().enumerate() {
        let bound = match mode {
            DecreaseMode::Plain => slack,
            DecreaseMode::Strong { beta, mu } => {
                let n_k = trace.records[i + 1].normalizer;
                -(s.normalized_gap + gamma * beta * mu * s.v / (4.0 * n_k)) + slack
            }
        };
        if s.delta_v > bound {
            violations.push(LyapunovViolation {
                k: s.k,
                bound,
                observed: s.delta_v,
            });
        }
    }
    Ok(violations)
}

/// Result of comparing `V_k` against `(1 − μγβ/(4N))^k V_0`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeReport {
    /// `C = γβ/(4N)`; the envelope is bounded by `exp(−μCk)V_0`.
    pub decay_constant: f64,
    pub violations: Vec<usize>,
    /// Largest `V_k / (envelope_k·(1 + tol))`; at most 1 iff no violations.
    pub max_ratio: f64,
}

impl EnvelopeReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn finding(&self) -> Finding {
        Finding {
            iteration: self.violations.first().copied(),
            quantity: String::from("envelope_ratio"),
            bound: 1.0,
            observed: self.max_ratio,
            passed: self.passed(),
        }
    }
}

/// Checks the exponential envelope on a trace with a constant normalizer `n`.
/// `V` is recomputed from the logged states against `trace.theta_star`.
pub fn exponential_envelope_check(
    trace: &Trace,
    hp: &HyperParams,
    n: f64,
    mu: f64,
    tol: f64,
) -> Result<EnvelopeReport> {
    require_positive("n", n)?;
    let theta_star = trace.theta_star.as_ref().ok_or(Error::UnknownOptimum)?;
    if let Some(r) = trace
        .records
        .iter()
        .find(|r| (r.normalizer - n).abs() > 1e-12 * n)
    {
        return Err(Error::Precondition(format!(
            "normalizer {} at k={} differs from the constant {n}",
            r.normalizer, r.k
        )));
    }
    let v = recompute_v(trace, theta_star, hp.gamma)?;
    let decay_constant = hp.gamma * hp.beta / (4.0 * n);
    let factor = 1.0 - mu * decay_constant;
    let v0 = v.first().copied().unwrap_or(0.0);
    let mut violations = Vec::new();
    let mut max_ratio: f64 = 0.0;
    for (r, &vk) in trace.records.iter().zip(&v) {
        let limit = math::pow(factor, r.k as f64) * v0 * (1.0 + tol);
        let ratio = if vk == 0.0 {
            0.0
        } else if limit == 0.0 {
            f64::INFINITY
        } else {
            vk / limit
        };
        max_ratio = max_ratio.max(ratio);
        if vk > limit {
            violations.push(r.k);
        }
    }
    Ok(EnvelopeReport {
        decay_constant,
        violations,
        max_ratio,
    })
}
