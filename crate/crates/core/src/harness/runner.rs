use alloc::format;
use alloc::vec::Vec;

use crate::analysis::{classify, lyapunov_value, solve_optimum, validate_hyperparams};
use crate::error::{Error, Result};
use crate::loss::{LossModel, RegressorSample};
use crate::trace::{Divergence, Trace, TraceRecord};
use crate::tuners::{
    gd_step, ht_step, integrate, nesterov_step, GdOptions, NesterovState, Normalization, TunerState,
};
use crate::vector::ParamVector;

use super::config::{config_hash, ExperimentConfig, RunLength, TunerKind};

/// A record whose loss divided by its normalizer exceeds this counts as diverged.
pub const DIVERGENCE_LOSS_LIMIT: f64 = 1e12;

/// Runs one experiment to completion.
///
/// Divergence is part of the result: the trace ends with a record flagged
/// `diverged` and carries a [`Divergence`]. Only invalid configurations and
/// loss/sample mismatches are errors.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Trace> {
    config.validate()?;
    let mut trace = Trace::new(config.name.clone(), config.tuner.as_str());
    trace.meta.config_hash = config_hash(config);

    let theta_star = match &config.model.known_optimum {
        Some(t) => t.clone(),
        None => solve_optimum(&config.model, &config.schedule.initial(), 1e-12)?,
    };
    trace.theta_star = Some(theta_star.clone());

    if matches!(config.tuner, TunerKind::Ht | TunerKind::HtContinuous) {
        let report = validate_hyperparams(&config.hyper);
        for c in report.conditions.iter().filter(|c| !c.passed) {
            trace.warnings.push(format!(
                "hyperparameters outside the proven region: {}",
                c.inequality
            ));
        }
    }

    let mut log = Logger {
        model: &config.model,
        theta_star: &theta_star,
        gamma: matches!(config.tuner, TunerKind::Ht | TunerKind::HtContinuous)
            .then_some(config.hyper.gamma),
        stop_below_gap: config.stop_below_gap,
        reference: None,
        prev_v: None,
    };

    match config.length {
        RunLength::Iterations(n) => run_discrete(config, n, &mut log, &mut trace)?,
        RunLength::Continuous { t_end, h } => {
            run_continuous(config, t_end, h, &mut log, &mut trace)?
        }
    }
    trace.stability = Some(classify(&trace, &theta_star));
    Ok(trace)
}

fn run_discrete(
    config: &ExperimentConfig,
    n: usize,
    log: &mut Logger<'_>,
    trace: &mut Trace,
) -> Result<()> {
    let model = &config.model;
    let hp = &config.hyper;
    let s0 = config.schedule.initial();
    match config.tuner {
        TunerKind::Ht => {
            let mut state = TunerState::new(config.theta0.clone(), config.vartheta0())?;
            if !log.record(
                trace,
                0,
                None,
                &s0,
                &state.theta,
                Some(&state.vartheta),
                None,
            )? {
                return Ok(());
            }
            for k in 0..n {
                let s = config.schedule.sample_at(k)?;
                match ht_step(&state, model, &s, hp) {
                    Ok((next, step)) => {
                        state = next;
                        let keep_going = log.record(
                            trace,
                            k + 1,
                            None,
                            &s,
                            &state.theta,
                            Some(&state.vartheta),
                            Some(step.normalizer),
                        )?;
                        if !keep_going {
                            break;
                        }
                    }
                    Err(e) => return log.fail(trace, k + 1, None, &s, e),
                }
            }
        }
        TunerKind::NormalizedGd => {
            let opts = GdOptions {
                alpha_bar: hp.alpha_bar,
                normalization: config.gd_normalization,
                allow_unsafe_step: config.allow_unsafe_step,
            };
            let used = match config.gd_normalization {
                Normalization::Fixed(value) => Some(value),
                Normalization::PerSample => None,
            };
            let mut theta = config.theta0.clone();
            if !log.record(trace, 0, None, &s0, &theta, None, used)? {
                return Ok(());
            }
            for k in 0..n {
                let s = config.schedule.sample_at(k)?;
                match gd_step(&theta, model, &s, &opts) {
                    Ok(next) => {
                        theta = next;
                        if !log.record(trace, k + 1, None, &s, &theta, None, used)? {
                            break;
                        }
                    }
                    Err(e) => return log.fail(trace, k + 1, None, &s, e),
                }
            }
        }
        TunerKind::Nesterov => {
            // The second initial state seeds ν₀.
            let mut state = NesterovState::new(config.theta0.clone(), config.vartheta0())?;
            if !log.record(
                trace,
                0,
                None,
                &s0,
                &state.theta,
                Some(&state.nu),
                Some(1.0),
            )? {
                return Ok(());
            }
            for k in 0..n {
                let s = config.schedule.sample_at(k)?;
                match nesterov_step(&state, model, &s, hp) {
                    Ok(next) => {
                        state = next;
                        if !log.record(
                            trace,
                            k + 1,
                            None,
                            &s,
                            &state.theta,
                            Some(&state.nu),
                            Some(1.0),
                        )? {
                            break;
                        }
                    }
                    Err(e) => return log.fail(trace, k + 1, None, &s, e),
                }
            }
        }
        TunerKind::HtContinuous => unreachable!("validated: continuous runs have a time span"),
    }
    Ok(())
}

fn run_continuous(
    config: &ExperimentConfig,
    t_end: f64,
    h: f64,
    log: &mut Logger<'_>,
    trace: &mut Trace,
) -> Result<()> {
    let initial = TunerState::new(config.theta0.clone(), config.vartheta0())?;
    let schedule = &config.schedule;
    let mut states: Vec<(usize, f64, TunerState)> = Vec::new();
    let outcome = integrate(
        &initial,
        &config.model,
        |t| schedule.sample_at_time(t),
        &config.hyper,
        t_end,
        h,
        |step| states.push((step.step, step.time, step.state.clone())),
    );
    for (step, time, state) in &states {
        // The state after step i was produced with the sample held from t = (i−1)h.
        let held = (*step as f64 - 1.0).max(0.0) * h;
        let s = schedule.sample_at_time(held)?;
        if !log.record(
            trace,
            *step,
            Some(*time),
            &s,
            &state.theta,
            Some(&state.vartheta),
            None,
        )? {
            return Ok(());
        }
    }
    if let Err(e) = outcome {
        let step = states.len();
        let s = schedule.sample_at_time((step as f64 - 1.0).max(0.0) * h)?;
        return log.fail(trace, step, Some(step as f64 * h), &s, e);
    }
    Ok(())
}

struct Logger<'a> {
    model: &'a LossModel,
    theta_star: &'a ParamVector,
    /// Set for the tuner, whose records carry the Lyapunov value.
    gamma: Option<f64>,
    stop_below_gap: Option<f64>,
    /// Last sample and the loss of `θ*` under it.
    reference: Option<(RegressorSample, f64)>,
    prev_v: Option<f64>,
}

impl Logger<'_> {
    fn optimum_loss(&mut self, sample: &RegressorSample) -> Result<f64> {
        if let Some((s, value)) = &self.reference {
            if s == sample {
                return Ok(*value);
            }
        }
        let value = self.model.eval(self.theta_star, sample)?.value;
        self.reference = Some((sample.clone(), value));
        Ok(value)
    }

    /// Appends one record. Returns whether the run should continue.
    #[allow(clippy::too_many_arguments)]
    fn record(
        &mut self,
        trace: &mut Trace,
        k: usize,
        time: Option<f64>,
        sample: &RegressorSample,
        theta: &ParamVector,
        aux: Option<&ParamVector>,
        normalizer: Option<f64>,
    ) -> Result<bool> {
        let eval = match self.model.eval(theta, sample) {
            Ok(e) => e,
            Err(Error::Overflow { .. }) => {
                self.fail(
                    trace,
                    k,
                    time,
                    sample,
                    Error::Overflow {
                        theta: theta.clone(),
                    },
                )?;
                return Ok(false);
            }
            Err(e) => return Err(e),
        };
        let normalizer = normalizer.unwrap_or(eval.normalizer);
        let loss_gap = eval.value - self.optimum_loss(sample)?;
        let lyapunov = match (self.gamma, aux) {
            (Some(gamma), Some(second)) => {
                let state = TunerState::new(theta.clone(), second.clone())?;
                Some(lyapunov_value(&state, self.theta_star, gamma)?)
            }
            _ => None,
        };
        let delta_v = match (lyapunov, self.prev_v) {
            (Some(v), Some(prev)) => Some(v - prev),
            _ => None,
        };
        self.prev_v = lyapunov;
        let finite = theta.is_finite() && aux.is_none_or(|a| a.is_finite());
        let exploded = eval.value / normalizer > DIVERGENCE_LOSS_LIMIT;
        let diverged = !finite || exploded;
        trace.push(TraceRecord {
            k,
            time,
            sample: sample.clone(),
            theta: theta.clone(),
            aux: aux.cloned(),
            loss: eval.value,
            loss_gap: Some(loss_gap),
            grad_norm: eval.gradient.norm(),
            normalizer,
            lyapunov,
            delta_v,
            diverged,
        })?;
        if diverged {
            trace.divergence = Some(Divergence {
                iteration: k,
                time,
                reason: if finite {
                    format!("normalized loss exceeded {DIVERGENCE_LOSS_LIMIT:e}")
                } else {
                    "non-finite state".into()
                },
            });
            return Ok(false);
        }
        Ok(!matches!(self.stop_below_gap, Some(eps) if loss_gap <= eps))
    }

    /// Closes the trace with a diverged record at `k`. The record repeats the
    /// last finite parameter and leaves the loss columns undefined.
    fn fail(
        &mut self,
        trace: &mut Trace,
        k: usize,
        time: Option<f64>,
        sample: &RegressorSample,
        err: Error,
    ) -> Result<()> {
        let reason = match &err {
            Error::Diverged { .. } => "update left the finite range".into(),
            Error::Overflow { theta } => format!("loss overflowed at theta={theta}"),
            _ => return Err(err),
        };
        let theta = match (&err, trace.last()) {
            (Error::Diverged { last_theta, .. }, _) => last_theta.clone(),
            (_, Some(r)) => r.theta.clone(),
            (Error::Overflow { theta }, None) => theta.clone(),
            _ => unreachable!(),
        };
        trace.push(TraceRecord {
            k,
            time,
            sample: sample.clone(),
            theta,
            aux: None,
            loss: f64::NAN,
            loss_gap: None,
            grad_norm: f64::NAN,
            normalizer: f64::NAN,
            lyapunov: None,
            delta_v: None,
            diverged: true,
        })?;
        trace.divergence = Some(Divergence {
            iteration: k,
            time,
            reason,
        });
        Ok(())
    }
}
