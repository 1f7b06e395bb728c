//! Library side of the `ditsim` command-line tool.
//!
//! A run is `config text -> RunConfig -> Outcome -> files`. Each stage is
//! public so tests can drive the pipeline without spawning the binary.

// `!(x > 0.0)` style checks are meant to reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod plot;
pub mod run;
pub mod table;

pub use config::{parse_config, parse_config_with, Command, Format, Overrides, RunConfig};
pub use error::CliError;
pub use run::{execute, run, Outcome, Written};
pub use table::{Cell, ResultTable};

/// Reads `path` and resolves it against the command-line overrides.
pub fn load_config(path: &std::path::Path, overrides: &Overrides) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
    parse_config_with(&text, overrides)
}
