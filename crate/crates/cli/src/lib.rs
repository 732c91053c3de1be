//! File formats, experiment configs, parallel drivers and verification
//! suites on top of `solyanik-core`. The `solyanik` binary is a thin layer
//! over [`runner`] and [`verify`].

pub mod config;
pub mod error;
pub mod formats;
pub mod parallel;
pub mod runner;
pub mod systems;
pub mod verify;

pub use config::{Experiment, ExperimentConfig};
pub use error::{exit, CliError, Result};
