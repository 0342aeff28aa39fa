//! Command-line front end for `twogrid`: argument parsing, the `solve`,
//! `spectrum`, `verify` and `figure` commands, and their file formats.

pub mod args;
pub mod commands;
pub mod error;
pub mod output;
pub mod verify;

pub use args::Cli;
pub use commands::run;
pub use error::{CliError, CliResult};
