//! Configuration, parallel Monte Carlo orchestration, CSV output and TLE
//! handling for the `stbeam` command-line tool.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod engine;
pub mod error;
pub mod experiment;
pub mod output;
pub mod tle_io;

pub use config::{load_config, ExperimentKind, ExperimentSpec};
pub use engine::Engine;
pub use error::{AppError, AppResult};
pub use experiment::{run_experiment, run_feasibility};
pub use output::{emit_csv, ResultRow};
