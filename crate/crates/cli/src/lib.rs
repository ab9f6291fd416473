//! File formats and job configuration of the `semialg` command.

pub mod config;
pub mod format;
