//! Library side of the `toda` command: configuration, suite orchestration
//! and output formats.

pub mod config;
pub mod run;
