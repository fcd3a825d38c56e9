//! Experiment runner: configs, instance generators, reports, and the
//! verification suite.

pub mod config;
pub mod generate;
pub mod report;
pub mod run;
pub mod suite;

pub use config::{CommandId, ExperimentConfig, Params, SetSpec};
pub use report::Report;
pub use run::{run, RunError};
