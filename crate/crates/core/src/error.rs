use alloc::string::String;

use crate::SensorId;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("force must be non-negative, got {0} N")]
    NegativeForce(f64),

    #[error("resistance must be positive and finite, got {0} ohm")]
    InvalidResistance(f64),

    #[error("voltage {volts} V outside [0, {v_in}] V")]
    VoltageOutOfRange { volts: f64, v_in: f64 },

    #[error("ADC reading {steps} outside [0, {max}]")]
    StepsOutOfRange { steps: u32, max: u32 },

    #[error("invalid circuit: {0}")]
    InvalidCircuit(&'static str),

    #[error("invalid sensor model: {0}")]
    InvalidModel(&'static str),

    #[error("sensor {sensor_id}: {reason}")]
    Calibration { sensor_id: SensorId, reason: String },

    #[error("equalization: {0}")]
    Equalization(String),

    #[error("unknown sensor {0}")]
    UnknownSensor(SensorId),

    #[error("no calibration curve for channel {0}")]
    MissingCurve(SensorId),

    #[error("expected {expected} items, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("no still window: {0}")]
    Baseline(String),

    #[error("timestamp {got} ms does not follow {previous} ms")]
    OutOfOrder { previous: u64, got: u64 },

    #[error("detector stepped before a base weight was registered")]
    NoBaseline,

    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),

    #[error("invalid trace spec: {0}")]
    InvalidSpec(String),
}
