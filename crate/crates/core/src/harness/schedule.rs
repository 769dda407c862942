use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::loss::RegressorSample;
use crate::math;

#[derive(Debug, Clone, PartialEq)]
pub enum ScheduleKind {
    Constant(RegressorSample),
    /// `before` for `k < switch_k`, `after` from `switch_k` on.
    StepChange {
        before: RegressorSample,
        after: RegressorSample,
        switch_k: usize,
    },
    /// Log-sum-exp samples with `a` fixed and
    /// `b_k = base + amplitude·sin(angular_rate·k)`, `k` in radians.
    Sinusoidal {
        a: f64,
        base: f64,
        amplitude: f64,
        angular_rate: f64,
    },
    /// Explicit list; its length is the horizon.
    Custom(Vec<RegressorSample>),
}

/// A deterministic sequence of samples indexed by iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressorSchedule {
    kind: ScheduleKind,
    horizon: usize,
}

impl RegressorSchedule {
    pub fn new(kind: ScheduleKind, horizon: usize) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::invalid("horizon", "must be at least 1"));
        }
        match &kind {
            ScheduleKind::StepChange {
                before,
                after,
                switch_k,
            } => {
                if *switch_k >= horizon {
                    return Err(Error::invalid(
                        "switch_k",
                        alloc::format!("{switch_k} is outside the horizon {horizon}"),
                    ));
                }
                if before.kind_name() != after.kind_name() {
                    return Err(Error::invalid(
                        "step-change",
                        "samples before and after differ in kind",
                    ));
                }
            }
            ScheduleKind::Sinusoidal {
                a,
                base,
                amplitude,
                angular_rate,
            } => {
                RegressorSample::log_sum_exp(*a, 1.0)?;
                if !(angular_rate.is_finite() && amplitude.is_finite()) {
                    return Err(Error::invalid(
                        "sinusoidal",
                        "rate and amplitude must be finite",
                    ));
                }
                if !(base.is_finite() && *base > amplitude.abs()) {
                    return Err(Error::invalid(
                        "base",
                        alloc::format!(
                            "{base} must exceed |amplitude| = {} to keep b positive",
                            amplitude.abs()
                        ),
                    ));
                }
            }
            ScheduleKind::Custom(list) => {
                if list.len() != horizon {
                    return Err(Error::invalid(
                        "horizon",
                        alloc::format!(
                            "custom list has {} samples, horizon is {horizon}",
                            list.len()
                        ),
                    ));
                }
            }
            ScheduleKind::Constant(_) => {}
        }
        Ok(RegressorSchedule { kind, horizon })
    }

    pub fn constant(sample: RegressorSample, horizon: usize) -> Result<Self> {
        Self::new(ScheduleKind::Constant(sample), horizon)
    }

    pub fn step_change(
        before: RegressorSample,
        after: RegressorSample,
        switch_k: usize,
        horizon: usize,
    ) -> Result<Self> {
        Self::new(
            ScheduleKind::StepChange {
                before,
                after,
                switch_k,
            },
            horizon,
        )
    }

    pub fn sinusoidal(
        a: f64,
        base: f64,
        amplitude: f64,
        angular_rate: f64,
        horizon: usize,
    ) -> Result<Self> {
        Self::new(
            ScheduleKind::Sinusoidal {
                a,
                base,
                amplitude,
                angular_rate,
            },
            horizon,
        )
    }

    pub fn custom(samples: Vec<RegressorSample>) -> Result<Self> {
        let horizon = samples.len();
        Self::new(ScheduleKind::Custom(samples), horizon)
    }

    pub fn kind(&self) -> &ScheduleKind {
        &self.kind
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn sample_at(&self, k: usize) -> Result<RegressorSample> {
        if k >= self.horizon {
            return Err(Error::OutOfRange {
                index: k,
                horizon: self.horizon,
            });
        }
        Ok(match &self.kind {
            ScheduleKind::Constant(s) => s.clone(),
            ScheduleKind::StepChange {
                before,
                after,
                switch_k,
            } => {
                if k < *switch_k {
                    before.clone()
                } else {
                    after.clone()
                }
            }
            ScheduleKind::Sinusoidal {
                a,
                base,
                amplitude,
                angular_rate,
            } => RegressorSample::LogSumExp {
                a: *a,
                b: base + amplitude * math::sin(angular_rate * k as f64),
            },
            ScheduleKind::Custom(list) => list[k].clone(),
        })
    }

    /// Sample-and-hold at one sample per unit time: `sample_at(⌊t⌋)`, with
    /// times past the horizon holding the last sample.
    pub fn sample_at_time(&self, t: f64) -> Result<RegressorSample> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::invalid(
                "t",
                alloc::format!("must be non-negative, got {t}"),
            ));
        }
        let k = (math::floor(t) as usize).min(self.horizon - 1);
        self.sample_at(k)
    }

    /// The first sample; every schedule has one.
    pub fn initial(&self) -> RegressorSample {
        self.sample_at(0).expect("horizon is at least 1")
    }
}
