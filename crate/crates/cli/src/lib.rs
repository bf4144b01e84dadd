//! Command implementations behind the `gwloc` binary.

pub mod cache;
pub mod commands;
pub mod config;
pub mod error;
pub mod records;

pub use commands::{enumerate, run_compute, run_integral, EnumKind, EnumerateArgs, Outcome};
pub use config::{Command, RunConfig};
pub use error::CliError;
