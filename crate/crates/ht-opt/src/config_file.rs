//! JSON experiment configuration.
//!
//! A file either spells out a full experiment or names a preset and
//! overrides some of its fields:
//!
//! ```json
//! { "preset": "fig1a", "tuner": "nesterov" }
//! ```
//!
//! Unknown keys are rejected at every level.

use std::path::Path;

use ht_core::harness::{
    preset, ExperimentConfig, OutputRequest, RegressorSchedule, RunLength, TunerKind,
};
use ht_core::loss::RegularizerForm;
use ht_core::tuners::{HyperParams, Normalization, Strictness};
use ht_core::{LossModel, ParamVector, RegressorSample, SmoothnessMode, TunerMode};
use serde::{Deserialize, Serialize};

use crate::error::{OptError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub loss: Option<LossSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<ScheduleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tuner: Option<TunerName>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hyper: Option<HyperSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strictness: Option<StrictnessName>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gd_normalization: Option<NormalizationSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub allow_unsafe_step: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta0: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vartheta0: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop_below_gap: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outputs: Option<OutputsSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TunerName {
    Ht,
    NormalizedGd,
    Nesterov,
    HtContinuous,
}

impl From<TunerName> for TunerKind {
    fn from(t: TunerName) -> Self {
        match t {
            TunerName::Ht => TunerKind::Ht,
            TunerName::NormalizedGd => TunerKind::NormalizedGd,
            TunerName::Nesterov => TunerKind::Nesterov,
            TunerName::HtContinuous => TunerKind::HtContinuous,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrictnessName {
    Strict,
    Research,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeName {
    Smooth,
    Strong,
    Continuous,
}

impl From<ModeName> for TunerMode {
    fn from(m: ModeName) -> Self {
        match m {
            ModeName::Smooth => TunerMode::DiscreteSmooth,
            ModeName::Strong => TunerMode::DiscreteStronglyConvex,
            ModeName::Continuous => TunerMode::Continuous,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SmoothnessName {
    ExactHessian,
    #[default]
    ConservativeBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum FormName {
    /// `L/N + μ/2‖θ−θ₀‖²`
    #[default]
    NormalizedInner,
    /// `L + μ/2‖θ−θ₀‖²`
    Plain,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum LossSpec {
    QuadraticRegression {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        known_optimum: Option<Vec<f64>>,
    },
    Logsumexp {
        #[serde(default)]
        smoothness: SmoothnessName,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        known_optimum: Option<Vec<f64>>,
    },
    Regularized {
        inner: Box<LossSpec>,
        mu: f64,
        anchor: Vec<f64>,
        #[serde(default)]
        form: FormName,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        known_optimum: Option<Vec<f64>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SampleSpec {
    Linear { phi: Vec<f64>, y: f64 },
    Logsumexp { a: f64, b: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ScheduleSpec {
    Constant {
        sample: SampleSpec,
        horizon: usize,
    },
    StepChange {
        before: SampleSpec,
        after: SampleSpec,
        switch_k: usize,
        horizon: usize,
    },
    Sinusoidal {
        a: f64,
        base: f64,
        amplitude: f64,
        angular_rate: f64,
        horizon: usize,
    },
    Custom {
        samples: Vec<SampleSpec>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HyperSpec {
    pub gamma: f64,
    pub beta: f64,
    #[serde(default)]
    pub mu: f64,
    /// Defaults to `γβ`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_bar: Option<f64>,
    /// Defaults to `1 − β`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_bar: Option<f64>,
    pub mode: ModeName,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum NormalizationSpec {
    PerSample,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputsSpec {
    #[serde(default = "yes")]
    pub csv: bool,
    #[serde(default)]
    pub json: bool,
    #[serde(default)]
    pub plot: bool,
}

fn yes() -> bool {
    true
}

fn vector(field: &str, values: Vec<f64>) -> Result<ParamVector> {
    ParamVector::new(values).map_err(|e| OptError::Usage(format!("{field}: {e}")))
}

impl SampleSpec {
    fn resolve(self) -> Result<RegressorSample> {
        Ok(match self {
            SampleSpec::Linear { phi, y } => RegressorSample::linear(vector("phi", phi)?, y)?,
            SampleSpec::Logsumexp { a, b } => RegressorSample::log_sum_exp(a, b)?,
        })
    }
}

impl LossSpec {
    fn resolve(self) -> Result<LossModel> {
        let (model, optimum) = match self {
            LossSpec::QuadraticRegression { known_optimum } => {
                (LossModel::quadratic_regression(), known_optimum)
            }
            LossSpec::Logsumexp {
                smoothness,
                known_optimum,
            } => {
                let mode = match smoothness {
                    SmoothnessName::ExactHessian => SmoothnessMode::ExactHessian,
                    SmoothnessName::ConservativeBound => SmoothnessMode::ConservativeBound,
                };
                (
                    LossModel::log_sum_exp().with_smoothness(mode),
                    known_optimum,
                )
            }
            LossSpec::Regularized {
                inner,
                mu,
                anchor,
                form,
                known_optimum,
            } => {
                let form = match form {
                    FormName::NormalizedInner => RegularizerForm::NormalizedInner,
                    FormName::Plain => RegularizerForm::Plain,
                };
                let model = LossModel::regularized_with(
                    inner.resolve()?,
                    mu,
                    vector("anchor", anchor)?,
                    form,
                )?;
                (model, known_optimum)
            }
        };
        Ok(match optimum {
            Some(opt) => model.with_known_optimum(vector("known_optimum", opt)?),
            None => model,
        })
    }
}

impl ScheduleSpec {
    fn resolve(self) -> Result<RegressorSchedule> {
        Ok(match self {
            ScheduleSpec::Constant { sample, horizon } => {
                RegressorSchedule::constant(sample.resolve()?, horizon)?
            }
            ScheduleSpec::StepChange {
                before,
                after,
                switch_k,
                horizon,
            } => RegressorSchedule::step_change(
                before.resolve()?,
                after.resolve()?,
                switch_k,
                horizon,
            )?,
            ScheduleSpec::Sinusoidal {
                a,
                base,
                amplitude,
                angular_rate,
                horizon,
            } => RegressorSchedule::sinusoidal(a, base, amplitude, angular_rate, horizon)?,
            ScheduleSpec::Custom { samples } => RegressorSchedule::custom(
                samples
                    .into_iter()
                    .map(SampleSpec::resolve)
                    .collect::<Result<_>>()?,
            )?,
        })
    }
}

impl HyperSpec {
    fn resolve(self) -> HyperParams {
        let mut hp = HyperParams::new(self.gamma, self.beta, self.mode.into()).with_mu(self.mu);
        if let Some(a) = self.alpha_bar {
            hp = hp.with_alpha_bar(a);
        }
        if let Some(b) = self.beta_bar {
            hp = hp.with_beta_bar(b);
        }
        hp
    }
}

impl ConfigFile {
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        serde_json::from_str(text).map_err(|source| OptError::Json {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| OptError::io(path, e))?;
        Self::parse(&text, path)
    }

    /// Builds the experiment. Structural problems are usage errors; the
    /// hyperparameter conditions are left to [`ExperimentConfig::validate`].
    pub fn resolve(self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.preset {
            Some(name) => preset(name)?,
            None => {
                let missing = |field: &str| {
                    OptError::Usage(format!("`{field}` is required without a preset"))
                };
                let model = self
                    .loss
                    .clone()
                    .ok_or_else(|| missing("loss"))?
                    .resolve()?;
                let schedule = self
                    .schedule
                    .clone()
                    .ok_or_else(|| missing("schedule"))?
                    .resolve()?;
                let hyper = self
                    .hyper
                    .clone()
                    .ok_or_else(|| missing("hyper"))?
                    .resolve();
                let theta0 = vector(
                    "theta0",
                    self.theta0.clone().ok_or_else(|| missing("theta0"))?,
                )?;
                let tuner: TunerKind = self.tuner.ok_or_else(|| missing("tuner"))?.into();
                let length = match tuner {
                    TunerKind::HtContinuous => RunLength::Continuous {
                        t_end: self.t_end.ok_or_else(|| missing("t_end"))?,
                        h: self.h.unwrap_or(1e-3),
                    },
                    _ => RunLength::Iterations(self.iterations.unwrap_or(schedule.horizon())),
                };
                ExperimentConfig {
                    name: self.name.clone().ok_or_else(|| missing("name"))?,
                    model,
                    schedule,
                    tuner,
                    hyper,
                    strictness: Strictness::Strict,
                    gd_normalization: Normalization::PerSample,
                    allow_unsafe_step: false,
                    theta0,
                    vartheta0: None,
                    length,
                    stop_below_gap: None,
                    seed: None,
                    outputs: OutputRequest::default(),
                }
            }
        };
        if self.preset.is_some() {
            if let Some(tuner) = self.tuner {
                cfg = cfg.with_tuner(tuner.into());
            }
            if let Some(loss) = self.loss {
                cfg.model = loss.resolve()?;
            }
            if let Some(schedule) = self.schedule {
                cfg.schedule = schedule.resolve()?;
            }
            if let Some(hyper) = self.hyper {
                cfg.hyper = hyper.resolve();
            }
            if let Some(theta0) = self.theta0 {
                cfg.theta0 = vector("theta0", theta0)?;
            }
            if let Some(name) = self.name {
                cfg.name = name;
            }
            match (cfg.tuner, self.t_end) {
                (TunerKind::HtContinuous, t_end) => {
                    cfg.length = RunLength::Continuous {
                        t_end: t_end.unwrap_or(cfg.schedule.horizon() as f64),
                        h: self.h.unwrap_or(1e-3),
                    }
                }
                (_, _) => {
                    if let Some(n) = self.iterations {
                        cfg.length = RunLength::Iterations(n);
                    }
                }
            }
        }
        if let Some(s) = self.strictness {
            cfg.strictness = match s {
                StrictnessName::Strict => Strictness::Strict,
                StrictnessName::Research => Strictness::Research,
            };
        }
        if let Some(n) = self.gd_normalization {
            cfg.gd_normalization = match n {
                NormalizationSpec::PerSample => Normalization::PerSample,
                NormalizationSpec::Fixed(v) => Normalization::Fixed(v),
            };
        }
        if let Some(flag) = self.allow_unsafe_step {
            cfg.allow_unsafe_step = flag;
        }
        if let Some(v) = self.vartheta0 {
            cfg.vartheta0 = Some(vector("vartheta0", v)?);
        }
        if let Some(eps) = self.stop_below_gap {
            cfg.stop_below_gap = Some(eps);
        }
        if self.seed.is_some() {
            cfg.seed = self.seed;
        }
        if let Some(o) = self.outputs {
            cfg.outputs = OutputRequest {
                csv: o.csv,
                json: o.json,
                plot: o.plot,
            };
        }
        Ok(cfg)
    }
}

/// Reads, parses and resolves a config file.
pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    ConfigFile::load(path)?.resolve()
}
