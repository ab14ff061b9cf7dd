//! Library side of the `landmod` command-line tool: experiment
//! configuration, the tabular model file format, report writers, and the
//! command implementations. The binary in `main.rs` is a thin
//! argument-parsing shell over this.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod tabular_io;

pub use error::{CliError, ExitCode};
