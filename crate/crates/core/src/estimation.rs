//! From 16-channel ADC frames to a total-weight signal and a registered base
//! weight.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::calibration::{CompensationTable, SensorCurve};
use crate::circuit::{AdcReading, DividerCircuit};
use crate::error::{Error, Result};
use crate::{SensorId, GRAVITY};

/// Sensors per foot.
pub const SENSORS_PER_FOOT: usize = 8;
/// Total channels across both insoles.
pub const CHANNELS: usize = 2 * SENSORS_PER_FOOT;
/// Stillness window required to register the base weight.
pub const STILL_WINDOW_MS: u64 = 5000;
/// Largest standard deviation, relative to the mean, that still counts as still.
pub const STILLNESS_TOLERANCE: f64 = 0.01;
/// Default smoothing window.
pub const DEFAULT_SMOOTHING_MS: u64 = 250;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Foot {
    Left,
    Right,
}

/// Sensor module position under the foot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Group {
    /// Metatarsal heads.
    Front,
    /// Heel.
    Back,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChannelPosition {
    pub foot: Foot,
    pub group: Group,
    /// 0..4 within the group.
    pub index: usize,
}

/// Fixed channel map: `L0..L7` then `R0..R7`; within a foot, sensors 0-3 sit
/// under the metatarsals and 4-7 under the heel.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SensorLayout;

impl SensorLayout {
    pub fn position(&self, channel: usize) -> ChannelPosition {
        assert!(channel < CHANNELS, "channel {channel} out of range");
        let foot = if channel < SENSORS_PER_FOOT {
            Foot::Left
        } else {
            Foot::Right
        };
        let local = channel % SENSORS_PER_FOOT;
        let group = if local < 4 { Group::Front } else { Group::Back };
        ChannelPosition {
            foot,
            group,
            index: local % 4,
        }
    }

    pub fn channel_id(&self, channel: usize) -> SensorId {
        let foot = match self.position(channel).foot {
            Foot::Left => 'L',
            Foot::Right => 'R',
        };
        SensorId::new(format!("{foot}{}", channel % SENSORS_PER_FOOT))
    }

    pub fn channel_ids(&self) -> Vec<SensorId> {
        (0..CHANNELS).map(|c| self.channel_id(c)).collect()
    }

    pub fn channel_of(&self, id: &SensorId) -> Option<usize> {
        (0..CHANNELS).find(|&c| self.channel_id(c) == *id)
    }
}

/// One instant of both insoles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleFrame {
    pub t_ms: u64,
    pub steps: [AdcReading; CHANNELS],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightSample {
    pub t_ms: u64,
    pub total_kg: f64,
    pub per_channel_n: [f64; CHANNELS],
}

impl WeightSample {
    /// Sample carrying only a total, for feeding the detector directly.
    pub fn total_only(t_ms: u64, total_kg: f64) -> Self {
        Self {
            t_ms,
            total_kg,
            per_channel_n: [0.0; CHANNELS],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Baseline {
    pub base_weight_kg: f64,
    pub window_ms: (u64, u64),
}

/// Converts frames into per-channel forces and total weight.
///
/// Without a compensation table every channel is looked up on its own curve.
/// With one, each channel's resistance gets its series compensation and is
/// looked up on the base sensor's curve.
#[derive(Debug, Clone)]
pub struct ForceDecoder {
    circuit: DividerCircuit,
    curves: Vec<SensorCurve>,
    equalized: Option<(Vec<f64>, SensorCurve)>,
}

impl ForceDecoder {
    pub fn new(
        circuit: DividerCircuit,
        curves: &BTreeMap<SensorId, SensorCurve>,
        compensation: Option<&CompensationTable>,
    ) -> Result<Self> {
        circuit.validate()?;
        let layout = SensorLayout;
        let mut ordered = Vec::with_capacity(CHANNELS);
        for id in layout.channel_ids() {
            ordered.push(curves.get(&id).cloned().ok_or(Error::MissingCurve(id))?);
        }
        let equalized = match compensation {
            None => None,
            Some(table) => {
                let base = curves
                    .get(&table.base_sensor_id)
                    .cloned()
                    .ok_or_else(|| Error::MissingCurve(table.base_sensor_id.clone()))?;
                let offsets = layout
                    .channel_ids()
                    .iter()
                    .map(|id| table.compensation(id))
                    .collect::<Result<Vec<_>>>()?;
                Some((offsets, base))
            }
        };
        Ok(Self {
            circuit,
            curves: ordered,
            equalized,
        })
    }

    pub fn circuit(&self) -> &DividerCircuit {
        &self.circuit
    }

    pub fn decode(&self, frame: &SampleFrame) -> WeightSample {
        let mut per_channel_n = [0.0; CHANNELS];
        for (c, (reading, force)) in frame.steps.iter().zip(per_channel_n.iter_mut()).enumerate() {
            let r = self.circuit.resistance_from_steps(*reading);
            *force = match &self.equalized {
                None => self.curves[c].interpolate_force(r),
                Some((offsets, base)) => {
                    let r = match r {
                        crate::Resistance::Ohms(ohm) => crate::Resistance::Ohms(ohm + offsets[c]),
                        open => open,
                    };
                    base.interpolate_force(r)
                }
            };
        }
        WeightSample {
            t_ms: frame.t_ms,
            total_kg: per_channel_n.iter().sum::<f64>() / GRAVITY,
            per_channel_n,
        }
    }
}

/// Single-frame convenience over [`ForceDecoder`].
pub fn frame_to_forces(
    frame: &SampleFrame,
    circuit: DividerCircuit,
    curves: &BTreeMap<SensorId, SensorCurve>,
    compensation: Option<&CompensationTable>,
) -> Result<WeightSample> {
    Ok(ForceDecoder::new(circuit, curves, compensation)?.decode(frame))
}

/// Trailing moving average of the total over `(t - window, t]`.
///
/// Per-channel forces pass through untouched.
#[derive(Debug, Clone)]
pub struct Smoother {
    window_ms: u64,
    history: VecDeque<(u64, f64)>,
}

impl Smoother {
    pub fn new(window_ms: u64) -> Result<Self> {
        if window_ms == 0 {
            return Err(Error::InvalidParameter("smoothing window must be positive"));
        }
        Ok(Self {
            window_ms,
            history: VecDeque::new(),
        })
    }

    pub fn push(&mut self, sample: WeightSample) -> Result<WeightSample> {
        if let Some(&(prev, _)) = self.history.back() {
            if sample.t_ms <= prev {
                return Err(Error::OutOfOrder {
                    previous: prev,
                    got: sample.t_ms,
                });
            }
        }
        self.history.push_back((sample.t_ms, sample.total_kg));
        while let Some(&(t, _)) = self.history.front() {
            if t + self.window_ms <= sample.t_ms {
                self.history.pop_front();
            } else {
                break;
            }
        }
        // Offsetting from the oldest value keeps constant input exact.
        let anchor = self.history[0].1;
        let offset: f64 = self.history.iter().map(|&(_, v)| v - anchor).sum();
        Ok(WeightSample {
            total_kg: anchor + offset / self.history.len() as f64,
            ..sample
        })
    }
}

pub fn smooth(samples: &[WeightSample], window_ms: u64) -> Result<Vec<WeightSample>> {
    let mut smoother = Smoother::new(window_ms)?;
    samples.iter().map(|s| smoother.push(*s)).collect()
}

/// Base weight from the earliest window of at least five seconds whose sample
/// standard deviation stays within 1% of its mean.
pub fn register_baseline(samples: &[WeightSample]) -> Result<Baseline> {
    let (Some(first), Some(last)) = (samples.first(), samples.last()) else {
        return Err(Error::Baseline("empty stream".to_string()));
    };
    if last.t_ms.saturating_sub(first.t_ms) < STILL_WINDOW_MS {
        return Err(Error::Baseline(format!(
            "stream spans {} ms, need {STILL_WINDOW_MS} ms",
            last.t_ms.saturating_sub(first.t_ms)
        )));
    }

    let mut end = 0;
    for start in 0..samples.len() {
        let t0 = samples[start].t_ms;
        while end < samples.len() && samples[end].t_ms < t0 + STILL_WINDOW_MS {
            end += 1;
        }
        if end == samples.len() {
            break;
        }
        let window = &samples[start..=end];
        let n = window.len() as f64;
        let mean = window.iter().map(|s| s.total_kg).sum::<f64>() / n;
        let var = window
            .iter()
            .map(|s| {
                let d = s.total_kg - mean;
                d * d
            })
            .sum::<f64>()
            / (n - 1.0);
        if mean > 0.0 && libm::sqrt(var) <= STILLNESS_TOLERANCE * mean {
            return Ok(Baseline {
                base_weight_kg: mean,
                window_ms: (t0, samples[end].t_ms),
            });
        }
    }
    Err(Error::Baseline(format!(
        "no {STILL_WINDOW_MS} ms window with deviation within {}% of its mean",
        STILLNESS_TOLERANCE * 100.0
    )))
}

/// Half of a frame as delivered by one foot's radio link.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FootFrame {
    pub t_ms: u64,
    pub steps: [AdcReading; SENSORS_PER_FOOT],
}

/// Join per-foot streams on equal timestamps. Frames present on only one side
/// are dropped; the count of dropped halves is returned alongside.
pub fn merge_foot_streams(left: &[FootFrame], right: &[FootFrame]) -> (Vec<SampleFrame>, usize) {
    let mut merged = Vec::with_capacity(left.len().min(right.len()));
    let (mut i, mut j, mut dropped) = (0, 0, 0);
    while i < left.len() && j < right.len() {
        let (l, r) = (&left[i], &right[j]);
        match l.t_ms.cmp(&r.t_ms) {
            core::cmp::Ordering::Less => {
                dropped += 1;
                i += 1;
            }
            core::cmp::Ordering::Greater => {
                dropped += 1;
                j += 1;
            }
            core::cmp::Ordering::Equal => {
                let mut steps = [AdcReading::OPEN; CHANNELS];
                steps[..SENSORS_PER_FOOT].copy_from_slice(&l.steps);
                steps[SENSORS_PER_FOOT..].copy_from_slice(&r.steps);
                merged.push(SampleFrame {
                    t_ms: l.t_ms,
                    steps,
                });
                i += 1;
                j += 1;
            }
        }
    }
    dropped += (left.len() - i) + (right.len() - j);
    (merged, dropped)
}
