//! File formats and command implementations for the `insole` tool.
//!
//! Algorithms live in [`insole_core`]; this crate reads and writes calibration
//! CSV, trace CSV, curve stores, scenarios, truth and event files.

pub mod calibration_csv;
pub mod commands;
pub mod error;
pub mod events;
pub mod files;
pub mod scenario;
pub mod store;
pub mod trace_csv;

pub use error::{Error, Result};
pub use insole_core;
