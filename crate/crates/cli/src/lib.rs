//! Command-line frontend: configuration, spectrum files and subcommands.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod spectrum_file;

pub use error::{CliError, Result};
