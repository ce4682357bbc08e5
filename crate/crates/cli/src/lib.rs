//! Experiment driver for the `shallow` command-line tool.
//!
//! Configs are JSON objects parsed strictly; results are CSV files with a
//! JSON sidecar describing the run.

// `!(x > 0.0)` is deliberate: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use config::{config_to_json, parse_config};
pub use error::{CliError, ConfigError};
