//! Front end for the mode-operator library: single spectra, reference-table
//! reproduction, kernel and second-order checks, and cached parameter sweeps.

#![deny(unsafe_code)]

pub mod cache;
pub mod commands;
pub mod config;
pub mod error;
pub mod reference;
pub mod report;
pub mod sweep;
pub mod tables;

pub use error::{CliError, Result};
