//! Command-line front end for the `mzi` binary.

pub mod commands;
pub mod config;

pub use commands::{run, CliError, CommandKind};
pub use config::{OutputFormat, RunArgs, RunConfig};
