//! Experiment harness behind the mapforge CLI: configuration, runners,
//! and summary statistics. The binary is a thin argument parser over
//! `runners`; integration and acceptance tests drive the same functions
//! directly.

pub mod config;
pub mod runners;
pub mod stats;
