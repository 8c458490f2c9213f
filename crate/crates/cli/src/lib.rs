//! Command-line driver for `qleak-core`: JSON code files, subspace
//! selectors, the analysis commands and the seeded verification suites.

pub mod commands;
pub mod error;
pub mod fixtures;
pub mod input;
pub mod selector;
pub mod suites;

pub use commands::{run, JobSpec};
pub use error::{CliError, CliResult};
