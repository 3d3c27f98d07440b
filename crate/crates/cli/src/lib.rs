//! Experiment plumbing for the `robustcolor` command.

pub mod config;
pub mod error;
pub mod experiments;
pub mod format;
