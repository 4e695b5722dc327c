//! File formats, parallel sampling and the `weylkit` command-line tool on top
//! of `weylkit-core`.

pub mod cli;
pub mod error;
pub mod format;
pub mod input;
pub mod parallel;

pub use error::{CliError, CliResult};
