//! Parameter sweeps over the glued qubit models, written as CSV.

pub mod config;
pub mod format;
pub mod grid;
pub mod sweep;

use std::fmt;

/// Bad flags, config keys or grids; the binary exits with code 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub(crate) fn usage<T>(msg: impl Into<String>) -> Result<T, UsageError> {
    Err(UsageError(msg.into()))
}

pub use config::{parse_config, Options};
pub use grid::Grid;
pub use sweep::{run_sweep, LambdaAxis, Model, Quantity, SweepRequest, Table};
