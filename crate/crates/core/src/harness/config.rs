use alloc::format;
use alloc::string::String;

use crate::error::{Error, Result};
use crate::loss::LossModel;
use crate::tuners::{HyperParams, Normalization, Strictness};
use crate::vector::ParamVector;

use super::schedule::RegressorSchedule;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TunerKind {
    Ht,
    NormalizedGd,
    Nesterov,
    HtContinuous,
}

impl TunerKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TunerKind::Ht => "ht",
            TunerKind::NormalizedGd => "normalized-gd",
            TunerKind::Nesterov => "nesterov",
            TunerKind::HtContinuous => "ht-continuous",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        [
            TunerKind::Ht,
            TunerKind::NormalizedGd,
            TunerKind::Nesterov,
            TunerKind::HtContinuous,
        ]
        .into_iter()
        .find(|t| t.as_str() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RunLength {
    Iterations(usize),
    /// RK4 from `t = 0` to `t_end` with step `h`.
    Continuous {
        t_end: f64,
        h: f64,
    },
}

/// Artifacts the CLI writes for a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutputRequest {
    pub csv: bool,
    pub json: bool,
    pub plot: bool,
}

impl Default for OutputRequest {
    fn default() -> Self {
        OutputRequest {
            csv: true,
            json: false,
            plot: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub name: String,
    pub model: LossModel,
    pub schedule: RegressorSchedule,
    pub tuner: TunerKind,
    pub hyper: HyperParams,
    pub strictness: Strictness,
    /// Normalizer used by the gradient-descent baseline.
    pub gd_normalization: Normalization,
    /// Let gradient descent run with `ᾱ ≥ 2`.
    pub allow_unsafe_step: bool,
    pub theta0: ParamVector,
    /// Defaults to `theta0`.
    pub vartheta0: Option<ParamVector>,
    pub length: RunLength,
    /// Stop once the loss gap is at or below this value.
    pub stop_below_gap: Option<f64>,
    /// Recorded for randomized suites; runs themselves are deterministic.
    pub seed: Option<u64>,
    pub outputs: OutputRequest,
}

impl ExperimentConfig {
    /// Same experiment driven by another tuner. The name's tuner suffix is
    /// replaced.
    pub fn with_tuner(mut self, tuner: TunerKind) -> Self {
        let stem = self
            .name
            .strip_suffix(self.tuner.as_str())
            .and_then(|s| s.strip_suffix('-'))
            .map(String::from)
            .unwrap_or_else(|| self.name.clone());
        self.name = format!("{stem}-{}", tuner.as_str());
        self.tuner = tuner;
        self
    }

    pub fn vartheta0(&self) -> ParamVector {
        self.vartheta0
            .clone()
            .unwrap_or_else(|| self.theta0.clone())
    }

    /// Structural checks plus the hyperparameter conditions under
    /// `self.strictness`. Every failure is reported as a config error.
    pub fn validate(&self) -> Result<()> {
        let cfg = |msg: String| Error::Config(format!("{}: {msg}", self.name));
        if self.name.trim().is_empty() {
            return Err(Error::Config("name must not be empty".into()));
        }
        let first = self.schedule.initial();
        if let Some(dim) = self.model.dimension_hint(&first) {
            if dim != self.theta0.dim() {
                return Err(cfg(format!(
                    "theta0 has dimension {}, the loss expects {dim}",
                    self.theta0.dim()
                )));
            }
        }
        if let Some(v) = &self.vartheta0 {
            self.theta0
                .check_dim(v)
                .map_err(|e| cfg(format!("vartheta0: {e}")))?;
        }
        self.model
            .eval(&self.theta0, &first)
            .map_err(|e| cfg(format!("loss rejects the first sample: {e}")))?;
        match (self.tuner, self.length) {
            (TunerKind::HtContinuous, RunLength::Iterations(_)) => {
                return Err(cfg("ht-continuous needs t_end and h".into()));
            }
            (TunerKind::HtContinuous, RunLength::Continuous { t_end, h }) => {
                if !(h.is_finite() && h > 0.0 && t_end.is_finite() && t_end > 0.0) {
                    return Err(cfg(format!("t_end={t_end} and h={h} must be positive")));
                }
            }
            (_, RunLength::Continuous { .. }) => {
                return Err(cfg(format!(
                    "{} runs by iteration count",
                    self.tuner.as_str()
                )));
            }
            (_, RunLength::Iterations(n)) => {
                if n > self.schedule.horizon() {
                    return Err(cfg(format!(
                        "{n} iterations exceed the schedule horizon {}",
                        self.schedule.horizon()
                    )));
                }
            }
        }
        if let Some(eps) = self.stop_below_gap {
            if !(eps.is_finite() && eps >= 0.0) {
                return Err(cfg(format!("stop_below_gap={eps} must be non-negative")));
            }
        }
        let hp = &self.hyper;
        match self.tuner {
            TunerKind::Ht => {
                hp.check(self.strictness).map_err(|e| cfg(format!("{e}")))?;
            }
            // Outside the proven region the continuous run only warns.
            TunerKind::HtContinuous => {
                if !(hp.gamma > 0.0 && hp.beta > 0.0) {
                    return Err(cfg("gamma and beta must be positive".into()));
                }
            }
            TunerKind::NormalizedGd => {
                if !(hp.alpha_bar.is_finite() && hp.alpha_bar > 0.0) {
                    return Err(cfg(format!("alpha_bar={} must be positive", hp.alpha_bar)));
                }
                if hp.alpha_bar >= 2.0 && !self.allow_unsafe_step {
                    return Err(cfg(format!(
                        "alpha_bar={} is outside (0, 2); set allow_unsafe_step",
                        hp.alpha_bar
                    )));
                }
                if let Normalization::Fixed(n) = self.gd_normalization {
                    if !(n.is_finite() && n > 0.0) {
                        return Err(cfg(format!("fixed normalizer {n} must be positive")));
                    }
                }
            }
            TunerKind::Nesterov => {
                if !(hp.alpha_bar.is_finite() && hp.alpha_bar > 0.0) {
                    return Err(cfg(format!("alpha_bar={} must be positive", hp.alpha_bar)));
                }
                if !(0.0..1.0).contains(&hp.beta_bar) {
                    return Err(cfg(format!("beta_bar={} must lie in [0, 1)", hp.beta_bar)));
                }
            }
        }
        Ok(())
    }
}

/// 64-bit FNV-1a over the configuration's `Debug` rendering.
pub fn config_hash(config: &ExperimentConfig) -> u64 {
    let text = format!("{config:?}");
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in text.bytes() {
        hash ^= u64::from(byte);
        hash = hash.wrapping_mul(0x0100_0000_01b3);
    }
    hash
}
