//! File formats, plotting and the command-line front end for `ht-core`.
//!
//! The binary is a thin wrapper around [`cli::run`], which returns the exit
//! code instead of exiting so the commands can be driven from tests.

pub mod cli;
pub mod config_file;
pub mod error;
pub mod export;
pub mod plot;
pub mod sampling;

pub use error::{OptError, Result};
