//! Synthetic insole traces with ground truth.
//!
//! A scenario is a list of segments (stand, walk, lift, carry, lower). They are
//! turned into a piecewise total-weight profile, spread over the 16 channels,
//! pushed through each sensor model, the divider and the ADC.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::calibration::CalibrationPoint;
use crate::circuit::{AdcReading, DividerCircuit, FsrModel};
use crate::detector::EventKind;
use crate::error::{Error, Result};
use crate::estimation::{Foot, Group, SampleFrame, SensorLayout, CHANNELS};
use crate::GRAVITY;

/// Duration of every transition ramp inside lift and lower segments.
pub const RAMP_MS: u64 = 300;

/// Share of each foot's load carried by the heel sensors at stance.
pub const DEFAULT_HEEL_FRACTION: f64 = 0.6;

/// Peak deviation of a foot's share of body weight from 0.5 while walking.
pub const DEFAULT_WALK_TRANSFER: f64 = 0.3;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "UPPERCASE"))]
pub enum Segment {
    /// Standing still at the current weight.
    Stand { duration_ms: u64 },
    /// Alternating-foot load transfer with a vertical oscillation of
    /// `amplitude_kg` at the step frequency.
    Walk {
        duration_ms: u64,
        step_freq_hz: f64,
        amplitude_kg: f64,
    },
    /// Bend (dip below the current weight), then stand up holding `load_kg`.
    Lift {
        load_kg: f64,
        #[cfg_attr(feature = "serde", serde(default = "defaults::dip_kg"))]
        dip_kg: f64,
        #[cfg_attr(feature = "serde", serde(default = "defaults::dip_ms"))]
        dip_ms: u64,
        #[cfg_attr(feature = "serde", serde(default = "defaults::ramp_ms"))]
        rise_ms: u64,
    },
    /// Stand holding the current load.
    Carry { duration_ms: u64 },
    /// Overshoot while positioning, then set the load down. The bend to put
    /// it on the floor undershoots the bare weight by `undershoot_kg` before
    /// recovering.
    Lower {
        #[cfg_attr(feature = "serde", serde(default = "defaults::spike_kg"))]
        spike_kg: f64,
        #[cfg_attr(feature = "serde", serde(default = "defaults::spike_ms"))]
        spike_ms: u64,
        #[cfg_attr(feature = "serde", serde(default = "defaults::ramp_ms"))]
        settle_ms: u64,
        #[cfg_attr(feature = "serde", serde(default = "defaults::dip_kg"))]
        undershoot_kg: f64,
    },
}

#[cfg(feature = "serde")]
mod defaults {
    pub fn dip_kg() -> f64 {
        3.0
    }
    pub fn spike_kg() -> f64 {
        3.0
    }
    pub fn dip_ms() -> u64 {
        400
    }
    pub fn spike_ms() -> u64 {
        400
    }
    pub fn ramp_ms() -> u64 {
        super::RAMP_MS
    }
}

impl Segment {
    pub fn lift(load_kg: f64) -> Self {
        Segment::Lift {
            load_kg,
            dip_kg: 3.0,
            dip_ms: 400,
            rise_ms: RAMP_MS,
        }
    }

    pub fn lower() -> Self {
        Segment::Lower {
            spike_kg: 3.0,
            spike_ms: 400,
            settle_ms: RAMP_MS,
            undershoot_kg: 3.0,
        }
    }

    pub fn duration_ms(&self) -> u64 {
        match *self {
            Segment::Stand { duration_ms }
            | Segment::Walk { duration_ms, .. }
            | Segment::Carry { duration_ms } => duration_ms,
            Segment::Lift {
                dip_ms, rise_ms, ..
            } => RAMP_MS + dip_ms + rise_ms,
            Segment::Lower {
                spike_ms,
                settle_ms,
                ..
            } => RAMP_MS + spike_ms + settle_ms + RAMP_MS,
        }
    }
}

/// Everything needed to synthesize a trace.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceSpec {
    pub sample_rate_hz: f64,
    pub subject_weight_kg: f64,
    /// One model per channel, in layout order.
    pub models: Vec<FsrModel>,
    pub circuit: DividerCircuit,
    /// Standard deviation of additive per-channel force noise, newtons.
    pub noise_sigma_n: f64,
    pub seed: u64,
    pub heel_fraction: f64,
    pub walk_transfer: f64,
    pub segments: Vec<Segment>,
}

impl TraceSpec {
    pub fn new(subject_weight_kg: f64, models: Vec<FsrModel>, segments: Vec<Segment>) -> Self {
        Self {
            sample_rate_hz: 10.0,
            subject_weight_kg,
            models,
            circuit: DividerCircuit::default(),
            noise_sigma_n: 0.0,
            seed: 0,
            heel_fraction: DEFAULT_HEEL_FRACTION,
            walk_transfer: DEFAULT_WALK_TRANSFER,
            segments,
        }
    }

    pub fn duration_ms(&self) -> u64 {
        self.segments.iter().map(Segment::duration_ms).sum()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        if !(self.sample_rate_hz.is_finite()
            && self.sample_rate_hz > 0.0
            && self.sample_rate_hz <= 1000.0)
        {
            return bad(format!(
                "sample rate {} Hz outside (0, 1000]",
                self.sample_rate_hz
            ));
        }
        if !(self.subject_weight_kg.is_finite() && self.subject_weight_kg > 0.0) {
            return bad(format!("subject weight {} kg", self.subject_weight_kg));
        }
        if self.models.len() != CHANNELS {
            return bad(format!(
                "need {CHANNELS} sensor models, got {}",
                self.models.len()
            ));
        }
        for m in &self.models {
            m.validate()?;
        }
        self.circuit.validate()?;
        if !(self.noise_sigma_n.is_finite() && self.noise_sigma_n >= 0.0) {
            return bad(format!("noise sigma {} N", self.noise_sigma_n));
        }
        if !(0.0..=1.0).contains(&self.heel_fraction) {
            return bad(format!(
                "heel fraction {} outside [0, 1]",
                self.heel_fraction
            ));
        }
        if !(0.0..=0.5).contains(&self.walk_transfer) {
            return bad(format!(
                "walk transfer {} outside [0, 0.5]",
                self.walk_transfer
            ));
        }

        let mut holding = false;
        for (i, seg) in self.segments.iter().enumerate() {
            let ok = match *seg {
                Segment::Stand { duration_ms } | Segment::Carry { duration_ms } => duration_ms > 0,
                Segment::Walk {
                    duration_ms,
                    step_freq_hz,
                    amplitude_kg,
                } => {
                    duration_ms > 0
                        && step_freq_hz.is_finite()
                        && step_freq_hz > 0.0
                        && amplitude_kg.is_finite()
                        && amplitude_kg >= 0.0
                }
                Segment::Lift {
                    load_kg,
                    dip_kg,
                    dip_ms,
                    rise_ms,
                } => {
                    if holding {
                        return bad(format!("segment {i}: lift while already holding a load"));
                    }
                    holding = true;
                    load_kg.is_finite()
                        && load_kg > 0.0
                        && dip_kg.is_finite()
                        && dip_kg >= 0.0
                        && dip_kg < self.subject_weight_kg
                        && dip_ms > 0
                        && rise_ms > 0
                }
                Segment::Lower {
                    spike_kg,
                    spike_ms,
                    settle_ms,
                    undershoot_kg,
                } => {
                    if !holding {
                        return bad(format!("segment {i}: lower without a lifted load"));
                    }
                    holding = false;
                    spike_kg.is_finite()
                        && spike_kg >= 0.0
                        && undershoot_kg.is_finite()
                        && undershoot_kg >= 0.0
                        && undershoot_kg < self.subject_weight_kg
                        && spike_ms > 0
                        && settle_ms > 0
                }
            };
            if !ok {
                return bad(format!("segment {i}: invalid parameters {seg:?}"));
            }
        }
        if holding {
            return bad("last lift is never lowered".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TruthEvent {
    pub kind: EventKind,
    pub t_ms: u64,
    pub load_kg: f64,
}

/// Expected activity events of a generated trace.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GroundTruth {
    pub subject_weight_kg: f64,
    pub events: Vec<TruthEvent>,
}

/// Shape of the total-weight profile over one time span.
#[derive(Debug, Clone, Copy)]
enum Shape {
    Ramp {
        from: f64,
        to: f64,
    },
    Walk {
        level: f64,
        amplitude: f64,
        freq_hz: f64,
    },
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    start: u64,
    end: u64,
    shape: Shape,
}

impl Piece {
    /// Total weight (kg) and the left foot's share at absolute time `t`.
    fn eval(&self, t: u64, walk_transfer: f64) -> (f64, f64) {
        let tau = (t - self.start) as f64;
        match self.shape {
            Shape::Ramp { from, to } => {
                let span = (self.end - self.start) as f64;
                (from + (to - from) * tau / span, 0.5)
            }
            Shape::Walk {
                level,
                amplitude,
                freq_hz,
            } => {
                let secs = tau / 1000.0;
                let total = level + amplitude * libm::sin(2.0 * PI * freq_hz * secs);
                // One left-right cycle spans two steps.
                let left = 0.5 + walk_transfer * libm::sin(PI * freq_hz * secs);
                (total, left)
            }
        }
    }
}

fn build_profile(spec: &TraceSpec) -> (Vec<Piece>, GroundTruth) {
    let base = spec.subject_weight_kg;
    let mut pieces = Vec::new();
    let mut events = Vec::new();
    let mut t = 0u64;
    let mut load = 0.0;
    let push = |pieces: &mut Vec<Piece>, t: &mut u64, len: u64, shape: Shape| {
        pieces.push(Piece {
            start: *t,
            end: *t + len,
            shape,
        });
        *t += len;
    };
    let hold = |v: f64| Shape::Ramp { from: v, to: v };

    for seg in &spec.segments {
        let level = base + load;
        match *seg {
            Segment::Stand { duration_ms } | Segment::Carry { duration_ms } => {
                push(&mut pieces, &mut t, duration_ms, hold(level));
            }
            Segment::Walk {
                duration_ms,
                step_freq_hz,
                amplitude_kg,
            } => push(
                &mut pieces,
                &mut t,
                duration_ms,
                Shape::Walk {
                    level,
                    amplitude: amplitude_kg,
                    freq_hz: step_freq_hz,
                },
            ),
            Segment::Lift {
                load_kg,
                dip_kg,
                dip_ms,
                rise_ms,
            } => {
                let low = level - dip_kg;
                push(
                    &mut pieces,
                    &mut t,
                    RAMP_MS,
                    Shape::Ramp {
                        from: level,
                        to: low,
                    },
                );
                push(&mut pieces, &mut t, dip_ms, hold(low));
                push(
                    &mut pieces,
                    &mut t,
                    rise_ms,
                    Shape::Ramp {
                        from: low,
                        to: level + load_kg,
                    },
                );
                load += load_kg;
                events.push(TruthEvent {
                    kind: EventKind::Lifting,
                    t_ms: t,
                    load_kg,
                });
            }
            Segment::Lower {
                spike_kg,
                spike_ms,
                settle_ms,
                undershoot_kg,
            } => {
                let peak = level + spike_kg;
                let low = base - undershoot_kg;
                push(
                    &mut pieces,
                    &mut t,
                    RAMP_MS,
                    Shape::Ramp {
                        from: level,
                        to: peak,
                    },
                );
                push(&mut pieces, &mut t, spike_ms, hold(peak));
                push(
                    &mut pieces,
                    &mut t,
                    settle_ms,
                    Shape::Ramp {
                        from: peak,
                        to: low,
                    },
                );
                events.push(TruthEvent {
                    kind: EventKind::Lowering,
                    t_ms: t,
                    load_kg: load,
                });
                push(
                    &mut pieces,
                    &mut t,
                    RAMP_MS,
                    Shape::Ramp {
                        from: low,
                        to: base,
                    },
                );
                load = 0.0;
            }
        }
    }
    (
        pieces,
        GroundTruth {
            subject_weight_kg: base,
            events,
        },
    )
}

/// Sample times, in milliseconds, for a trace of `duration_ms`.
pub fn sample_times(sample_rate_hz: f64, duration_ms: u64) -> Vec<u64> {
    let period = 1000.0 / sample_rate_hz;
    (0u64..)
        .map(|k| libm::round(k as f64 * period) as u64)
        .take_while(|&t| t < duration_ms)
        .collect()
}

/// True (noise-free) force on every channel for a total weight and left-foot share.
pub fn channel_forces(total_kg: f64, left_share: f64, heel_fraction: f64) -> [f64; CHANNELS] {
    let layout = SensorLayout;
    let newtons = total_kg * GRAVITY;
    core::array::from_fn(|c| {
        let pos = layout.position(c);
        let foot = match pos.foot {
            Foot::Left => left_share,
            Foot::Right => 1.0 - left_share,
        };
        let group = match pos.group {
            Group::Back => heel_fraction,
            Group::Front => 1.0 - heel_fraction,
        };
        newtons * foot * group / 4.0
    })
}

/// Noise-free compression sweep of one sensor from 0 N to its maximum force
/// in `step_n` increments, as a calibration rig records it.
pub fn calibration_sweep(model: &FsrModel, step_n: f64) -> Result<Vec<CalibrationPoint>> {
    if !(step_n.is_finite() && step_n > 0.0) {
        return Err(Error::InvalidParameter("sweep step must be positive"));
    }
    let steps = libm::floor(model.max_force / step_n + 1e-9) as u64;
    (0..=steps)
        .map(|k| {
            let f = (k as f64 * step_n).min(model.max_force);
            Ok(CalibrationPoint {
                force: f,
                resistance: model.resistance_from_force(f)?,
            })
        })
        .collect()
}

/// A generated trace, its ground truth, and the noise-free total behind each frame.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedTrace {
    pub frames: Vec<SampleFrame>,
    pub truth: GroundTruth,
    pub true_total_kg: Vec<f64>,
}

pub fn generate_trace(spec: &TraceSpec) -> Result<GeneratedTrace> {
    spec.validate()?;
    let (pieces, truth) = build_profile(spec);
    let times = sample_times(spec.sample_rate_hz, spec.duration_ms());

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let noise = if spec.noise_sigma_n > 0.0 {
        Some(Normal::new(0.0, spec.noise_sigma_n).map_err(|e| Error::InvalidSpec(format!("{e}")))?)
    } else {
        None
    };

    let mut frames = Vec::with_capacity(times.len());
    let mut true_total_kg = Vec::with_capacity(times.len());
    let mut piece = 0;
    for t in times {
        while pieces[piece].end <= t {
            piece += 1;
        }
        let (total, left) = pieces[piece].eval(t, spec.walk_transfer);
        let forces = channel_forces(total, left, spec.heel_fraction);
        let mut steps = [AdcReading::OPEN; CHANNELS];
        for (c, (reading, &force)) in steps.iter_mut().zip(&forces).enumerate() {
            let force = match &noise {
                Some(n) => (force + n.sample(&mut rng)).max(0.0),
                None => force,
            };
            let r = spec.models[c].resistance_from_force(force)?;
            *reading = spec
                .circuit
                .adc_quantize(spec.circuit.divider_voltage(r)?)?;
        }
        frames.push(SampleFrame { t_ms: t, steps });
        true_total_kg.push(total);
    }
    Ok(GeneratedTrace {
        frames,
        truth,
        true_total_kg,
    })
}
