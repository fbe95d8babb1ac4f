//! IO companion to the `semitoric` library: JSON job parsing, command
//! execution with deterministic reports, and the acceptance suite backing
//! the `selftest` command.

pub mod acceptance;
pub mod commands;
pub mod job;
