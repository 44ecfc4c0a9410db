//! Command-line front end: grid datasets, verification reports,
//! Crank–Nicolson comparisons and the reference figure data.

pub mod args;
pub mod commands;
pub mod error;
pub mod figures;
pub mod formats;
pub mod manifest;
pub mod sample;
pub mod suite;

pub use commands::run;
pub use error::{CliError, CliResult};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_RUNTIME: u8 = 3;
