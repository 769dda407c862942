//! Core algorithms for the high-order tuner (HT).
//!
//! The HT is a two-state momentum method `(θ, ϑ)` whose gradient steps are
//! divided by a normalizing signal `N_k = 1 + H_k`, where `H_k` bounds the
//! spectrum of the loss Hessian at iteration `k`. The normalization keeps the
//! method stable when the loss drifts from one iteration to the next, which
//! plain gradient descent and Nesterov's method do not survive.
//!
//! The crate is `no_std` (with `alloc`) and holds everything that is pure
//! computation:
//!
//! - [`loss`]: the loss contract and the concrete families (linear
//!   regression, scalar log-sum-exp, and the strongly convex regularized
//!   wrapper).
//! - [`tuners`]: the discrete HT, normalized gradient descent, Nesterov's
//!   method and the continuous-time HT with a fixed-step RK4 integrator.
//! - [`analysis`]: Lyapunov values, hyperparameter bounds, decrease and
//!   envelope checks, finite-difference oracles and convergence diagnostics.
//! - [`harness`]: regressor schedules, experiment configs, the run loop and
//!   the figure presets.
//!
//! File formats, plotting and the command line live in the `ht-opt` crate.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod analysis;
pub mod error;
pub mod harness;
pub mod loss;
mod math;
pub mod trace;
pub mod tuners;
pub mod vector;

pub use error::{Error, Result};
pub use loss::{LossEvaluation, LossFamily, LossModel, Objective, RegressorSample, SmoothnessMode};
pub use trace::{Trace, TraceRecord};
pub use tuners::{HyperParams, NesterovState, TunerMode, TunerState};
pub use vector::ParamVector;
