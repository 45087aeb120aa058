//! File formats, reports, verification suites and the `cqsl` command line
//! on top of [`cqsl_core`].

pub mod cli;
pub mod error;
pub mod report;
pub mod state_io;
pub mod surface;
pub mod verify;

pub use error::CliError;
