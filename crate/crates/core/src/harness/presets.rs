//! The experiment settings behind the published figures.
//!
//! Every fig1 preset starts the tuner at `θ₀ = ϑ₀ = 5` with `a_k = ½`, uses
//! the conservative normalizer `H_k = b_k²`, and freezes the baselines' step
//! size at its `k = 0` value. The baselines run on the unnormalized loss.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::analysis::{max_gamma, GammaBound};
use crate::error::{Error, Result};
use crate::loss::{LossFamily, LossModel, RegressorSample};
use crate::tuners::{nesterov_gains, HyperParams, Normalization, Strictness, TunerMode};
use crate::vector::ParamVector;

use super::config::{ExperimentConfig, OutputRequest, RunLength, TunerKind};
use super::schedule::{RegressorSchedule, ScheduleKind};

pub const PRESET_NAMES: [&str; 6] = [
    "fig1a",
    "fig1b",
    "fig1c",
    "fig1d",
    "fig3-ht",
    "fig3-nesterov",
];
pub const FIGURE_NAMES: [&str; 5] = ["fig1a", "fig1b", "fig1c", "fig1d", "fig3"];

const A: f64 = 0.5;
const THETA0: f64 = 5.0;
const BETA: f64 = 0.1;
/// Momentum of the fig1 Nesterov baseline, `1 − β`.
const FIG1_BETA_BAR: f64 = 1.0 - BETA;
const SHORT_HORIZON: usize = 1000;
const LONG_HORIZON: usize = 5000;
const B_LOW: f64 = 7.0;
const B_HIGH: f64 = 14.0;
const SINE_BASE: f64 = 14.0;
const SINE_AMPLITUDE: f64 = 7.0;
const SINE_RATE: f64 = 200.0;

const FIG3_MU: f64 = 1e-4;
const FIG3_B: f64 = 1.0;
/// `N = 1 + b²` for the fig3 loss.
const FIG3_N: f64 = 1.0 + FIG3_B * FIG3_B;
const FIG3_ITERATIONS: usize = 20_000;
const FIG3_STOP_GAP: f64 = 1e-10;

fn lse(b: f64) -> RegressorSample {
    RegressorSample::LogSumExp { a: A, b }
}

fn base(
    name: &str,
    model: LossModel,
    schedule: RegressorSchedule,
    hyper: HyperParams,
    iterations: usize,
) -> ExperimentConfig {
    ExperimentConfig {
        name: String::from(name),
        model,
        schedule,
        tuner: TunerKind::Ht,
        hyper,
        strictness: Strictness::Strict,
        gd_normalization: Normalization::Fixed(1.0),
        allow_unsafe_step: false,
        theta0: ParamVector::scalar(THETA0),
        vartheta0: None,
        length: RunLength::Iterations(iterations),
        stop_below_gap: None,
        seed: None,
        outputs: OutputRequest::default(),
    }
}

fn logsumexp_at_zero() -> LossModel {
    LossModel::log_sum_exp().with_known_optimum(ParamVector::scalar(0.0))
}

/// Large-step setting: `γ = 1/β`, baselines at `ᾱ = 1/L̄₀` with `L̄₀ = b₀²`.
fn large_steps(name: &str, schedule: RegressorSchedule, b0: f64) -> ExperimentConfig {
    let hyper = HyperParams::new(1.0 / BETA, BETA, TunerMode::DiscreteSmooth)
        .with_alpha_bar(1.0 / (b0 * b0))
        .with_beta_bar(FIG1_BETA_BAR);
    let mut c = base(name, logsumexp_at_zero(), schedule, hyper, SHORT_HORIZON);
    // γ = 1/β is deliberately outside the proven region.
    c.strictness = Strictness::Research;
    c
}

/// Proven setting: `γ = β(2−β)/(8+β)`, baselines at `ᾱ = γβ/N₀` with `N₀ = 1 + b₀²`.
fn safe_steps(name: &str, schedule: RegressorSchedule, b0: f64) -> Result<ExperimentConfig> {
    let gamma = max_gamma(BETA, 0.0, GammaBound::Smooth)?;
    let hyper = HyperParams::new(gamma, BETA, TunerMode::DiscreteSmooth)
        .with_alpha_bar(gamma * BETA / (1.0 + b0 * b0))
        .with_beta_bar(FIG1_BETA_BAR);
    Ok(base(
        name,
        logsumexp_at_zero(),
        schedule,
        hyper,
        LONG_HORIZON,
    ))
}

fn sinusoid(horizon: usize) -> Result<RegressorSchedule> {
    RegressorSchedule::sinusoidal(A, SINE_BASE, SINE_AMPLITUDE, SINE_RATE, horizon)
}

fn fig3_sample() -> RegressorSample {
    lse(FIG3_B)
}

fn fig3_gains() -> Result<crate::tuners::NesterovGains> {
    // Smoothness of L/N + μ/2‖θ−θ₀‖²: b²/N + μ.
    nesterov_gains(FIG3_B * FIG3_B / FIG3_N + FIG3_MU, FIG3_MU)
}

fn fig3(
    name: &str,
    model: LossModel,
    tuner: TunerKind,
    hyper: HyperParams,
) -> Result<ExperimentConfig> {
    let schedule = RegressorSchedule::constant(fig3_sample(), FIG3_ITERATIONS)?;
    let mut c = base(name, model, schedule, hyper, FIG3_ITERATIONS);
    c.tuner = tuner;
    c.stop_below_gap = Some(FIG3_STOP_GAP);
    // γ = ᾱ/β lies far outside the strongly convex bound.
    c.strictness = Strictness::Research;
    Ok(c)
}

/// Resolves a preset by name. The fig1 presets return the tuner
/// configuration; [`ExperimentConfig::with_tuner`] switches to a baseline.
pub fn preset(name: &str) -> Result<ExperimentConfig> {
    match name {
        "fig1a" => Ok(large_steps(
            "fig1a-ht",
            RegressorSchedule::step_change(lse(B_LOW), lse(B_HIGH), 25, SHORT_HORIZON)?,
            B_LOW,
        )),
        "fig1b" => safe_steps(
            "fig1b-ht",
            RegressorSchedule::step_change(lse(B_LOW), lse(B_HIGH), 1500, LONG_HORIZON)?,
            B_LOW,
        ),
        "fig1c" => Ok(large_steps("fig1c-ht", sinusoid(SHORT_HORIZON)?, SINE_BASE)),
        "fig1d" => safe_steps("fig1d-ht", sinusoid(LONG_HORIZON)?, SINE_BASE),
        "fig3-ht" => {
            let g = fig3_gains()?;
            let beta = 1.0 - g.beta_bar;
            let hyper =
                HyperParams::new(g.alpha_bar / beta, beta, TunerMode::DiscreteStronglyConvex)
                    .with_mu(FIG3_MU)
                    .with_alpha_bar(g.alpha_bar)
                    .with_beta_bar(g.beta_bar);
            let model = LossModel::regularized_plain(
                LossModel::log_sum_exp(),
                FIG3_MU,
                ParamVector::scalar(THETA0),
            )?;
            fig3("fig3-ht", model, TunerKind::Ht, hyper)
        }
        "fig3-nesterov" => {
            let g = fig3_gains()?;
            let hyper = HyperParams::new(
                g.alpha_bar / (1.0 - g.beta_bar),
                1.0 - g.beta_bar,
                TunerMode::DiscreteStronglyConvex,
            )
            .with_mu(FIG3_MU)
            .with_alpha_bar(g.alpha_bar)
            .with_beta_bar(g.beta_bar);
            let model = LossModel::regularized(
                LossModel::log_sum_exp(),
                FIG3_MU,
                ParamVector::scalar(THETA0),
            )?;
            fig3("fig3-nesterov", model, TunerKind::Nesterov, hyper)
        }
        other => Err(Error::UnknownPreset(String::from(other))),
    }
}

/// All configurations compared in one figure, in display order.
pub fn figure(name: &str) -> Result<Vec<ExperimentConfig>> {
    match name {
        "fig1a" | "fig1b" | "fig1c" | "fig1d" => {
            let ht = preset(name)?;
            Ok(vec![
                ht.clone(),
                ht.clone().with_tuner(TunerKind::NormalizedGd),
                ht.with_tuner(TunerKind::Nesterov),
            ])
        }
        "fig3" => Ok(vec![preset("fig3-ht")?, preset("fig3-nesterov")?]),
        other => Err(Error::UnknownPreset(String::from(other))),
    }
}

/// The numeric constants a configuration resolves to, as `(name, value)`
/// pairs in a fixed order. Absent constants are omitted.
pub fn provenance(config: &ExperimentConfig) -> Vec<(&'static str, f64)> {
    let mut out = Vec::new();
    match config.schedule.kind() {
        ScheduleKind::Constant(RegressorSample::LogSumExp { a, b }) => {
            out.push(("a", *a));
            out.push(("b", *b));
        }
        ScheduleKind::StepChange {
            before: RegressorSample::LogSumExp { a, b: b0 },
            after: RegressorSample::LogSumExp { b: b1, .. },
            switch_k,
        } => {
            out.push(("a", *a));
            out.push(("b_before", *b0));
            out.push(("b_after", *b1));
            out.push(("switch_k", *switch_k as f64));
        }
        ScheduleKind::Sinusoidal {
            a,
            base,
            amplitude,
            angular_rate,
        } => {
            out.push(("a", *a));
            out.push(("b_base", *base));
            out.push(("b_amplitude", *amplitude));
            out.push(("angular_rate", *angular_rate));
        }
        _ => {}
    }
    out.push(("horizon", config.schedule.horizon() as f64));
    if let RunLength::Iterations(n) = config.length {
        out.push(("iterations", n as f64));
    }
    out.push(("theta0", config.theta0[0]));
    if let LossFamily::Regularized { mu, anchor, .. } = &config.model.family {
        out.push(("mu", *mu));
        out.push(("anchor", anchor[0]));
    }
    let hp = &config.hyper;
    out.push(("beta", hp.beta));
    out.push(("gamma", hp.gamma));
    out.push(("alpha_bar", hp.alpha_bar));
    out.push(("beta_bar", hp.beta_bar));
    if let Some(eps) = config.stop_below_gap {
        out.push(("stop_below_gap", eps));
    }
    out
}
