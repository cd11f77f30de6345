//! Simulation scenarios as JSON. Sensor models come from a curve store, so a
//! scenario only describes the wearer and what they do.
//!
//! ```json
//! {
//!   "subject_weight_kg": 83.0,
//!   "noise_sigma_n": 2.0,
//!   "seed": 7,
//!   "segments": [
//!     { "kind": "STAND", "duration_ms": 6000 },
//!     { "kind": "LIFT", "load_kg": 18.6 },
//!     { "kind": "CARRY", "duration_ms": 2000 },
//!     { "kind": "LOWER", "spike_kg": 4.0 }
//!   ]
//! }
//! ```

use std::path::Path;

use insole_core::traces::{DEFAULT_HEEL_FRACTION, DEFAULT_WALK_TRANSFER};
use insole_core::{DividerCircuit, FsrModel, Segment, TraceSpec};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::files::read_string;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub subject_weight_kg: f64,
    #[serde(default = "default_rate")]
    pub sample_rate_hz: f64,
    #[serde(default)]
    pub noise_sigma_n: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_heel")]
    pub heel_fraction: f64,
    #[serde(default = "default_walk")]
    pub walk_transfer: f64,
    pub segments: Vec<Segment>,
}

fn default_rate() -> f64 {
    10.0
}

fn default_heel() -> f64 {
    DEFAULT_HEEL_FRACTION
}

fn default_walk() -> f64 {
    DEFAULT_WALK_TRANSFER
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self> {
        serde_json::from_str(&read_string(path)?).map_err(|e| Error::format(path, e.to_string()))
    }

    pub fn to_spec(&self, models: Vec<FsrModel>, circuit: DividerCircuit) -> TraceSpec {
        TraceSpec {
            sample_rate_hz: self.sample_rate_hz,
            subject_weight_kg: self.subject_weight_kg,
            models,
            circuit,
            noise_sigma_n: self.noise_sigma_n,
            seed: self.seed,
            heel_fraction: self.heel_fraction,
            walk_transfer: self.walk_transfer,
            segments: self.segments.clone(),
        }
    }
}
