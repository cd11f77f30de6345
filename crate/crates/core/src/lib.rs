//! Force-sensing-resistor insole: sensor and readout models, calibration and
//! equalization, total-weight estimation, and lift/lower activity detection.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, logging and the
//! command-line front end live in the `insole` crate.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod calibration;
pub mod circuit;
pub mod detector;
pub mod error;
pub mod estimation;
pub mod isotonic;
pub mod pipeline;
pub mod report;
pub mod traces;

use alloc::string::String;
use core::fmt;

pub use calibration::{CalibrationPoint, CompensationTable, CurvePoint, SensorCurve};
pub use circuit::{AdcReading, DividerCircuit, FsrModel, Resistance};
pub use detector::{ActivityEvent, Detector, DetectorConfig, EventKind, Phase};
pub use error::{Error, Result};
pub use estimation::{Baseline, SampleFrame, SensorLayout, WeightSample};
pub use pipeline::{run_detector, BaseWeight, DetectionRun, PipelineConfig};
pub use report::{build_report, EventRecord, RunReport, Tolerances};
pub use traces::{GroundTruth, Segment, TraceSpec};

/// Standard gravity used for every newton/kilogram conversion.
pub const GRAVITY: f64 = 9.8;

/// Identifier of one sensor / ADC channel, e.g. `L3` or `R7`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct SensorId(String);

impl SensorId {
    pub fn new(id: impl Into<String>) -> Self {
        Self(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for SensorId {
    fn from(id: &str) -> Self {
        Self(id.into())
    }
}

impl From<String> for SensorId {
    fn from(id: String) -> Self {
        Self(id)
    }
}

impl From<&SensorId> for SensorId {
    fn from(id: &SensorId) -> Self {
        id.clone()
    }
}

impl fmt::Display for SensorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}
