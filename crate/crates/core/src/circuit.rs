//! Sensor physics and the measurement chain.
//!
//! ```text
//! resistance  = r_const / force                    (FSR model)
//! v_out       = v_in * r2 / (r_fsr + r2)           (voltage divider)
//! steps       = round(v_out * adc_levels / v_in)   (ADC, clamped to adc_levels - 1)
//! r_recovered = r2 * (adc_levels / steps - 1)      (inverse divider)
//! ```

use crate::error::{Error, Result};
use crate::SensorId;

/// Upper end of the shunt sensor's rated range, in newtons.
pub const SENSOR_MAX_FORCE_N: f64 = 441.0;

/// A sensor resistance, or no conduction at all.
///
/// An unloaded FSR is an open circuit. Keeping that as its own variant means
/// zero-force channels map to exactly 0 N downstream instead of a tiny
/// force read off an arbitrary "huge" resistance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Resistance {
    Ohms(f64),
    Open,
}

impl Resistance {
    pub fn ohms(self) -> Option<f64> {
        match self {
            Resistance::Ohms(r) => Some(r),
            Resistance::Open => None,
        }
    }

    pub fn is_open(self) -> bool {
        matches!(self, Resistance::Open)
    }
}

/// Smooth force-to-resistance response `R / F` for one sensor.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FsrModel {
    pub sensor_id: SensorId,
    /// Model constant in ohm·newton.
    pub r_const: f64,
    /// Below this force the sensor does not conduct.
    pub min_force: f64,
    /// Forces above this saturate.
    pub max_force: f64,
}

impl FsrModel {
    pub fn new(
        sensor_id: impl Into<SensorId>,
        r_const: f64,
        min_force: f64,
        max_force: f64,
    ) -> Result<Self> {
        let model = Self {
            sensor_id: sensor_id.into(),
            r_const,
            min_force,
            max_force,
        };
        model.validate()?;
        Ok(model)
    }

    /// Model over the full rated range, conducting for any positive force.
    pub fn with_constant(sensor_id: impl Into<SensorId>, r_const: f64) -> Result<Self> {
        Self::new(sensor_id, r_const, 0.0, SENSOR_MAX_FORCE_N)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r_const.is_finite() && self.r_const > 0.0) {
            return Err(Error::InvalidModel("r_const must be positive"));
        }
        if !(self.min_force >= 0.0 && self.min_force < self.max_force && self.max_force.is_finite())
        {
            return Err(Error::InvalidModel("need 0 <= min_force < max_force"));
        }
        Ok(())
    }

    /// Resistance produced by `force` newtons.
    ///
    /// Zero force, or anything under `min_force`, is an open circuit. Forces
    /// past `max_force` saturate at the resistance of `max_force`.
    pub fn resistance_from_force(&self, force: f64) -> Result<Resistance> {
        if force.is_nan() || force < 0.0 {
            return Err(Error::NegativeForce(force));
        }
        if force == 0.0 || force < self.min_force {
            return Ok(Resistance::Open);
        }
        let force = force.min(self.max_force);
        Ok(Resistance::Ohms(self.r_const / force))
    }

    /// Inverse of [`resistance_from_force`](Self::resistance_from_force) inside the model range.
    pub fn force_from_resistance(&self, resistance: Resistance) -> f64 {
        match resistance {
            Resistance::Open => 0.0,
            Resistance::Ohms(r) => (self.r_const / r).min(self.max_force),
        }
    }
}

/// Protection / measurement voltage divider feeding the ADC.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DividerCircuit {
    /// Supply voltage, volts.
    pub v_in: f64,
    /// Fixed divider resistor, ohms.
    pub r2: f64,
    /// Number of ADC levels (1024 for 10 bits).
    pub adc_levels: u32,
    /// Maximum current the sensor ink tolerates, amperes.
    pub i_max: f64,
}

impl Default for DividerCircuit {
    fn default() -> Self {
        Self {
            v_in: 3.3,
            r2: 5600.0,
            adc_levels: 1024,
            i_max: 0.0005,
        }
    }
}

/// A raw ADC sample; 0 means the channel is unloaded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct AdcReading(u16);

impl AdcReading {
    pub const OPEN: AdcReading = AdcReading(0);

    pub fn steps(self) -> u16 {
        self.0
    }
}

/// Outcome of [`DividerCircuit::check_current_limit`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurrentCheck {
    pub current_a: f64,
    pub within_limit: bool,
}

impl DividerCircuit {
    pub fn new(v_in: f64, r2: f64, adc_levels: u32, i_max: f64) -> Result<Self> {
        let circuit = Self {
            v_in,
            r2,
            adc_levels,
            i_max,
        };
        circuit.validate()?;
        Ok(circuit)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.v_in.is_finite() && self.v_in > 0.0) {
            return Err(Error::InvalidCircuit("v_in must be positive"));
        }
        if !(self.r2.is_finite() && self.r2 > 0.0) {
            return Err(Error::InvalidCircuit("r2 must be positive"));
        }
        if self.adc_levels < 2 || self.adc_levels > u32::from(u16::MAX) + 1 {
            return Err(Error::InvalidCircuit("adc_levels must be in [2, 65536]"));
        }
        if !(self.i_max.is_finite() && self.i_max > 0.0) {
            return Err(Error::InvalidCircuit("i_max must be positive"));
        }
        Ok(())
    }

    pub fn max_steps(&self) -> u32 {
        self.adc_levels - 1
    }

    /// Checked constructor for a reading on this circuit's ADC.
    pub fn reading(&self, steps: u32) -> Result<AdcReading> {
        if steps > self.max_steps() {
            return Err(Error::StepsOutOfRange {
                steps,
                max: self.max_steps(),
            });
        }
        Ok(AdcReading(steps as u16))
    }

    /// Voltage across the fixed resistor for a given sensor resistance.
    pub fn divider_voltage(&self, r_fsr: Resistance) -> Result<f64> {
        match r_fsr {
            Resistance::Open => Ok(0.0),
            Resistance::Ohms(r) if r.is_finite() && r > 0.0 => {
                Ok(self.v_in * self.r2 / (r + self.r2))
            }
            Resistance::Ohms(r) => Err(Error::InvalidResistance(r)),
        }
    }

    /// Round-to-nearest quantization, clamped to the top code.
    pub fn adc_quantize(&self, volts: f64) -> Result<AdcReading> {
        if !(0.0..=self.v_in).contains(&volts) {
            return Err(Error::VoltageOutOfRange {
                volts,
                v_in: self.v_in,
            });
        }
        let steps = libm::round(volts * f64::from(self.adc_levels) / self.v_in);
        Ok(AdcReading((steps as u32).min(self.max_steps()) as u16))
    }

    pub fn resistance_from_steps(&self, reading: AdcReading) -> Resistance {
        self.resistance_from_step_count(u32::from(reading.0))
            .expect("AdcReading never exceeds the ADC range")
    }

    /// Same as [`resistance_from_steps`](Self::resistance_from_steps) but also accepts the
    /// unreachable full-scale count `adc_levels`, which maps to 0 Ω.
    pub fn resistance_from_step_count(&self, steps: u32) -> Result<Resistance> {
        if steps > self.adc_levels {
            return Err(Error::StepsOutOfRange {
                steps,
                max: self.adc_levels,
            });
        }
        if steps == 0 {
            return Ok(Resistance::Open);
        }
        let levels = f64::from(self.adc_levels);
        Ok(Resistance::Ohms(
            self.r2 * (levels / f64::from(steps) - 1.0),
        ))
    }

    /// The inverse-divider expression written out without cancelling `v_in`:
    /// `v_in * r2 / (v_in * steps / adc_levels) - r2`.
    pub fn resistance_from_steps_unreduced(&self, steps: f64) -> f64 {
        let levels = f64::from(self.adc_levels);
        (self.v_in * self.r2) / (self.v_in * (steps / levels)) - self.r2
    }

    /// Current through the sensor at its lowest expected resistance.
    pub fn check_current_limit(&self, r_fsr_min: Resistance) -> CurrentCheck {
        let current_a = match r_fsr_min {
            Resistance::Open => 0.0,
            Resistance::Ohms(r) => self.v_in / (r.max(0.0) + self.r2),
        };
        CurrentCheck {
            current_a,
            within_limit: current_a <= self.i_max,
        }
    }

    /// Unquantized ADC position of a resistance, in (fractional) steps.
    pub fn ideal_steps(&self, r_fsr: f64) -> f64 {
        f64::from(self.adc_levels) * self.r2 / (r_fsr + self.r2)
    }

    /// Worst-case |recovered − true| resistance (ohms) caused by quantization.
    ///
    /// The ADC code sits within half a step of the ideal position, except near
    /// full scale where the clamp to `adc_levels - 1` can add up to one step.
    /// Returns `None` when the reading may collapse to 0 (open).
    pub fn recovery_error_bound(&self, r_fsr: f64) -> Option<f64> {
        let ideal = self.ideal_steps(r_fsr);
        let top = f64::from(self.max_steps());
        let deviation = if ideal > top - 0.5 {
            (ideal - top).max(0.5)
        } else {
            0.5
        };
        let lowest = ideal - deviation;
        if lowest < 1.0 {
            return None;
        }
        Some(self.r2 * f64::from(self.adc_levels) * deviation / (lowest * ideal))
    }
}
