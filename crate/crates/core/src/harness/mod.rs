//! Experiment definitions: regressor schedules, run configuration, the run
//! loop and the figure presets.

mod config;
mod presets;
mod runner;
mod schedule;

pub use config::{config_hash, ExperimentConfig, OutputRequest, RunLength, TunerKind};
pub use presets::{figure, preset, provenance, FIGURE_NAMES, PRESET_NAMES};
pub use runner::{run_experiment, DIVERGENCE_LOSS_LIMIT};
pub use schedule::{RegressorSchedule, ScheduleKind};
