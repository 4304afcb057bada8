//! IO, formats and the command-line front end of the detection experiments.

pub mod cli;
pub mod commands;
pub mod config;
pub mod output;
pub mod parallel;
