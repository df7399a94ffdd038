//! Experiment runner for the `fracprop` library.

pub mod config;
pub mod eigenbasis;
pub mod error;
pub mod experiments;
pub mod output;
pub mod references;
