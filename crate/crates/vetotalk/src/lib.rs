//! File formats and commands for `vetotalk`, the command-line front end of
//! `vetotalk-core`.
//!
//! Games, profiles and results are JSON with every number written as an
//! exact rational string. See the README for the schemas.

#![allow(clippy::result_large_err)]

pub mod commands;
pub mod error;
pub mod files;
mod render;

pub use commands::Completed;
pub use error::{CliError, EXIT_ERROR, EXIT_UNRESOLVED};
