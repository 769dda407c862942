//! Per-iteration run logs.

use alloc::string::String;
use alloc::vec::Vec;

use crate::analysis::Stability;
use crate::error::{Error, Result};
use crate::loss::RegressorSample;
use crate::vector::ParamVector;

/// One logged iteration. Record `k` holds the state after `k` updates.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub k: usize,
    /// Integration time, for continuous runs.
    pub time: Option<f64>,
    /// The sample the loss columns were evaluated with: the sample of the
    /// update that produced this state (sample 0 for the initial record).
    pub sample: RegressorSample,
    pub theta: ParamVector,
    /// `ϑ` for the tuner, `ν` for Nesterov, absent for gradient descent.
    pub aux: Option<ParamVector>,
    pub loss: f64,
    /// `L(θ_k) − L(θ*)` under the same sample.
    pub loss_gap: Option<f64>,
    pub grad_norm: f64,
    pub normalizer: f64,
    pub lyapunov: Option<f64>,
    /// `V_k − V_{k−1}`; absent on the first record.
    pub delta_v: Option<f64>,
    pub diverged: bool,
}

/// Where and why a run stopped early.
#[derive(Debug, Clone, PartialEq)]
pub struct Divergence {
    pub iteration: usize,
    pub time: Option<f64>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TraceMeta {
    /// FNV-1a hash of the resolved configuration.
    pub config_hash: u64,
    pub wall_time_secs: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trace {
    pub name: String,
    pub tuner: String,
    pub records: Vec<TraceRecord>,
    pub divergence: Option<Divergence>,
    pub stability: Option<Stability>,
    pub theta_star: Option<ParamVector>,
    pub meta: TraceMeta,
    pub warnings: Vec<String>,
}

impl Trace {
    pub fn new(name: impl Into<String>, tuner: impl Into<String>) -> Self {
        Trace {
            name: name.into(),
            tuner: tuner.into(),
            ..Trace::default()
        }
    }

    /// Appends a record. Indices must strictly increase, and nothing may
    /// follow a diverged record.
    pub fn push(&mut self, record: TraceRecord) -> Result<()> {
        if let Some(last) = self.records.last() {
            if last.diverged {
                return Err(Error::Precondition(alloc::format!(
                    "trace `{}` already diverged at k={}",
                    self.name,
                    last.k
                )));
            }
            if record.k <= last.k {
                return Err(Error::Precondition(alloc::format!(
                    "record k={} does not follow k={}",
                    record.k,
                    last.k
                )));
            }
        }
        self.records.push(record);
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn last(&self) -> Option<&TraceRecord> {
        self.records.last()
    }

    /// A non-finite state or exploding loss stopped the run.
    pub fn hard_diverged(&self) -> bool {
        self.divergence.is_some()
    }

    /// Hard divergence, or a non-converging classification.
    pub fn unstable(&self) -> bool {
        self.hard_diverged() || self.stability.is_some_and(|s| s != Stability::Converging)
    }

    pub fn final_gap(&self) -> Option<f64> {
        self.records.last().and_then(|r| r.loss_gap)
    }

    /// Gaps with the final diverged record dropped.
    pub fn finite_gaps(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.records
            .iter()
            .filter(|r| !r.diverged)
            .filter_map(|r| r.loss_gap.map(|g| (r.k, g)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(k: usize, diverged: bool) -> TraceRecord {
        TraceRecord {
            k,
            time: None,
            sample: RegressorSample::log_sum_exp(0.5, 1.0).unwrap(),
            theta: ParamVector::scalar(1.0),
            aux: None,
            loss: 0.0,
            loss_gap: Some(0.0),
            grad_norm: 0.0,
            normalizer: 2.0,
            lyapunov: None,
            delta_v: None,
            diverged,
        }
    }

    #[test]
    fn indices_must_increase() {
        let mut t = Trace::new("t", "ht");
        t.push(record(0, false)).unwrap();
        t.push(record(1, false)).unwrap();
        assert!(t.push(record(1, false)).is_err());
        assert_eq!(t.len(), 2);
    }

    #[test]
    fn nothing_after_divergence() {
        let mut t = Trace::new("t", "gd");
        t.push(record(0, false)).unwrap();
        t.push(record(1, true)).unwrap();
        assert!(t.push(record(2, false)).is_err());
    }
}
