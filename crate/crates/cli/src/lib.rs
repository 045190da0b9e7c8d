//! File formats, exporters, sweep harness and command-line plumbing for
//! `emergence-core`.

pub mod bundle;
pub mod cli;
pub mod dot;
pub mod error;
pub mod io;
pub mod manifest;
pub mod run;
pub mod sweep;

pub use error::{CliError, CliResult};
