use crate::trace::Trace;
use crate::vector::ParamVector;

/// Long-run behaviour of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    /// The distance to the optimum shrinks, or is already negligible.
    Converging,
    /// A sustained sign-alternating cycle around the optimum.
    Oscillating,
    /// The distance to the optimum does not shrink and does not alternate.
    Drifting,
    /// The run stopped on a non-finite state or an exploding loss.
    Blowup,
}

impl Stability {
    pub fn as_str(self) -> &'static str {
        match self {
            Stability::Converging => "converging",
            Stability::Oscillating => "oscillating",
            Stability::Drifting => "drifting",
            Stability::Blowup => "blowup",
        }
    }

    pub fn is_stable(self) -> bool {
        self == Stability::Converging
    }
}

const WINDOWS: usize = 5;
const MIN_RECORDS: usize = 10;

/// Classifies a trace from `e_k = ‖θ_k − θ*‖` over its second half.
///
/// The second half is cut into five windows. Let `r` be the ratio of the
/// last window's peak error to the first window's, and `s` the fraction of
/// steps in the last window where `θ − θ*` flips sign. A run whose last peak
/// is below `1e−9·max(1, e_0)` converges. Otherwise `r ≥ 1` means it
/// oscillates (when `s ≥ ½`) or drifts, and a run that still alternates
/// with `r > ½` is a slowly damped or persistent cycle and counts as
/// oscillating.
///
/// Bounded-gradient losses make divergent baselines settle into bounded
/// limit cycles instead of overflowing, which a finite-value test alone
/// cannot tell apart from convergence.
pub fn classify(trace: &Trace, theta_star: &ParamVector) -> Stability {
    if trace.hard_diverged() {
        return Stability::Blowup;
    }
    let records = &trace.records;
    if records.len() < MIN_RECORDS {
        return Stability::Converging;
    }
    let err = |i: usize| crate::math::sqrt(records[i].theta.dist_sq(theta_star));
    let floor = 1e-9 * err(0).max(1.0);

    let start = records.len() / 2;
    let span = records.len() - start;
    let window = |w: usize| {
        let lo = start + w * span / WINDOWS;
        let hi = start + (w + 1) * span / WINDOWS;
        lo..hi
    };
    let peak = |w: usize| window(w).map(err).fold(0.0_f64, f64::max);
    let first = peak(0);
    let last = peak(WINDOWS - 1);
    if last <= floor {
        return Stability::Converging;
    }
    let ratio = if first > 0.0 {
        last / first
    } else {
        f64::INFINITY
    };

    let tail = window(WINDOWS - 1);
    let steps = tail.len().saturating_sub(1).max(1);
    let flips = tail
        .clone()
        .zip(tail.skip(1))
        .filter(|&(i, j)| {
            let a = records[i].theta.sub(theta_star);
            let b = records[j].theta.sub(theta_star);
            a.dot(&b) < 0.0
        })
        .count();
    let alternating = flips as f64 / steps as f64 >= 0.5;

    if ratio >= 1.0 {
        if alternating {
            Stability::Oscillating
        } else {
            Stability::Drifting
        }
    } else if alternating && ratio > 0.5 {
        Stability::Oscillating
    } else {
        Stability::Converging
    }
}
