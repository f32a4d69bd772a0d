//! Reproducible experiment driver for `permwig`.
//!
//! An [`ExperimentConfig`] is a TOML document naming one experiment, its inputs
//! and a mandatory seed. [`run`] evaluates it and returns a [`Report`] that
//! echoes the inputs next to the results and any declared tolerance checks.

pub mod config;
pub mod recipes;
pub mod run;

pub use config::{Check, Experiment, ExperimentConfig};
pub use recipes::Recipe;
pub use run::{run, write_outputs, CheckOutcome, Report};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] permwig::Error),
    #[error("output error: {0}")]
    Output(String),
}

impl CliError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> u8 {
        2
    }
}
