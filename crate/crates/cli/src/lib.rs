//! Experiment runner for the fockcomm simulator.
pub mod config;
pub mod error;
pub mod plot;
pub mod run;
pub mod validate;
