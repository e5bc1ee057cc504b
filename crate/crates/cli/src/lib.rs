//! Configuration, presets and file output for the `ewave` command.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod output;
pub mod presets;
pub mod quantity;

pub use commands::{exit_code, ExitCode};
pub use config::{ConfigError, RunConfig};
