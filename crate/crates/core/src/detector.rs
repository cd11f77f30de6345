//! Streaming lift/lower detector.
//!
//! ```text
//!            dip below base            rise above base, settled for time_threshold
//!   IDLE ─────────────────▶ PRE_LIFTING ──────────────────────────────────────▶ LIFTING  (emit LIFTING)
//!    ▲                         │ back near base for 2 × time_threshold              │
//!    ├─────────────────────────┘                                                    │ spike above base + lifted
//!    │                  drop below base                                             ▼
//!    └───────────────────────────────────────────────────────────────────────  PRE_LOWERING  (emit LOWERING)
//! ```

use alloc::collections::VecDeque;

use crate::error::{Error, Result};
use crate::estimation::WeightSample;

/// A threshold of `max(floor_kg, fraction * reference)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Margin {
    pub floor_kg: f64,
    pub fraction: f64,
}

impl Margin {
    pub const fn absolute(kg: f64) -> Self {
        Self {
            floor_kg: kg,
            fraction: 0.0,
        }
    }

    pub const fn relative(floor_kg: f64, fraction: f64) -> Self {
        Self { floor_kg, fraction }
    }

    pub fn resolve(&self, reference_kg: f64) -> f64 {
        self.floor_kg.max(self.fraction * reference_kg)
    }

    fn is_positive(&self) -> bool {
        self.floor_kg.is_finite()
            && self.fraction.is_finite()
            && self.floor_kg >= 0.0
            && self.fraction >= 0.0
            && (self.floor_kg > 0.0 || self.fraction > 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DetectorConfig {
    /// How long a rise must hold before LIFTING is declared.
    pub time_threshold_ms: u64,
    /// Dip below base that arms lift detection (reference: base).
    pub dip_margin: Margin,
    /// Rise above base that counts as carrying a load (reference: base).
    pub rise_margin: Margin,
    /// Overshoot above base + lifted that arms lowering (reference: base + lifted).
    pub spike_margin: Margin,
    /// Largest spread of the held rise samples (reference: base).
    pub settle_band: Margin,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            time_threshold_ms: 250,
            dip_margin: Margin::relative(2.0, 0.025),
            rise_margin: Margin::relative(2.0, 0.025),
            spike_margin: Margin::relative(0.0, 0.025),
            settle_band: Margin::relative(2.0, 0.025),
        }
    }
}

impl DetectorConfig {
    /// Every margin as a fixed number of kilograms.
    pub fn absolute(time_threshold_ms: u64, dip: f64, rise: f64, spike: f64, settle: f64) -> Self {
        Self {
            time_threshold_ms,
            dip_margin: Margin::absolute(dip),
            rise_margin: Margin::absolute(rise),
            spike_margin: Margin::absolute(spike),
            settle_band: Margin::absolute(settle),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.time_threshold_ms == 0 {
            return Err(Error::InvalidParameter("time threshold must be positive"));
        }
        let margins = [
            self.dip_margin,
            self.rise_margin,
            self.spike_margin,
            self.settle_band,
        ];
        if !margins.iter().all(Margin::is_positive) {
            return Err(Error::InvalidParameter("detector margins must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Idle,
    PreLifting,
    Lifting,
    PreLowering,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "UPPERCASE"))]
pub enum EventKind {
    Lifting,
    Lowering,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActivityEvent {
    pub kind: EventKind,
    pub t_ms: u64,
    /// Load estimate; only set on LIFTING.
    pub lifted_kg: Option<f64>,
    pub base_kg: f64,
    /// Total weight at the triggering sample.
    pub detected_kg: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorState {
    pub phase: Phase,
    pub base_weight: f64,
    /// Meaningful in LIFTING and PRE_LOWERING.
    pub lifted_weight: f64,
    pub phase_entry_time: u64,
    /// Start of the currently held rise, if one is in progress.
    pub rise_start_time: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct Detector {
    config: DetectorConfig,
    state: Option<DetectorState>,
    last_t: Option<u64>,
    /// (t, total) samples of the held rise, oldest first.
    rise: VecDeque<(u64, f64)>,
    rise_anchor: u64,
    /// Last PRE_LIFTING sample outside the base band.
    band_exit: u64,
    lifted_sum: f64,
    lifted_count: u32,
}

impl Detector {
    /// A detector waiting for [`set_base`](Self::set_base).
    pub fn new(config: DetectorConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            config,
            state: None,
            last_t: None,
            rise: VecDeque::new(),
            rise_anchor: 0,
            band_exit: 0,
            lifted_sum: 0.0,
            lifted_count: 0,
        })
    }

    pub fn with_base(config: DetectorConfig, base_kg: f64) -> Result<Self> {
        let mut d = Self::new(config)?;
        d.set_base(base_kg)?;
        Ok(d)
    }

    /// Register the base weight and reset to IDLE.
    pub fn set_base(&mut self, base_kg: f64) -> Result<()> {
        if !(base_kg.is_finite() && base_kg > 0.0) {
            return Err(Error::InvalidParameter("base weight must be positive"));
        }
        self.state = Some(DetectorState {
            phase: Phase::Idle,
            base_weight: base_kg,
            lifted_weight: 0.0,
            phase_entry_time: self.last_t.unwrap_or(0),
            rise_start_time: None,
        });
        self.rise.clear();
        Ok(())
    }

    pub fn config(&self) -> &DetectorConfig {
        &self.config
    }

    pub fn state(&self) -> Option<&DetectorState> {
        self.state.as_ref()
    }

    pub fn step(&mut self, sample: &WeightSample) -> Result<Option<ActivityEvent>> {
        let mut state = self.state.ok_or(Error::NoBaseline)?;
        let t = sample.t_ms;
        let prev_t = match self.last_t {
            Some(prev) if t <= prev => {
                return Err(Error::OutOfOrder {
                    previous: prev,
                    got: t,
                })
            }
            prev => prev,
        };
        self.last_t = Some(t);

        let w = sample.total_kg;
        let base = state.base_weight;
        let cfg = self.config;
        let mut event = None;

        match state.phase {
            Phase::Idle => {
                if w < base - cfg.dip_margin.resolve(base) {
                    state.phase = Phase::PreLifting;
                    state.phase_entry_time = t;
                    state.rise_start_time = None;
                    self.rise.clear();
                    self.band_exit = t;
                }
            }
            Phase::PreLifting => {
                let rise = cfg.rise_margin.resolve(base);
                if w > base + rise {
                    self.push_rise(t, w, prev_t.unwrap_or(t), cfg.settle_band.resolve(base));
                    let start = self.rise_anchor;
                    state.rise_start_time = Some(start);
                    if t - start >= cfg.time_threshold_ms {
                        let n = self.rise.len() as f64;
                        let sum: f64 = self.rise.iter().map(|&(_, v)| v - base).sum();
                        self.lifted_sum = sum;
                        self.lifted_count = self.rise.len() as u32;
                        state.lifted_weight = sum / n;
                        state.phase = Phase::Lifting;
                        state.phase_entry_time = t;
                        state.rise_start_time = None;
                        self.rise.clear();
                        event = Some(ActivityEvent {
                            kind: EventKind::Lifting,
                            t_ms: t,
                            lifted_kg: Some(state.lifted_weight),
                            base_kg: base,
                            detected_kg: w,
                        });
                    }
                } else {
                    self.rise.clear();
                    state.rise_start_time = None;
                }

                if state.phase == Phase::PreLifting {
                    if (w - base).abs() <= cfg.dip_margin.resolve(base) {
                        if t - self.band_exit >= 2 * cfg.time_threshold_ms {
                            state.phase = Phase::Idle;
                            state.phase_entry_time = t;
                            state.rise_start_time = None;
                            self.rise.clear();
                        }
                    } else {
                        self.band_exit = t;
                    }
                }
            }
            Phase::Lifting => {
                let lifted = state.lifted_weight;
                let spike = cfg.spike_margin.resolve(base + lifted);
                if w > base + lifted + spike {
                    state.phase = Phase::PreLowering;
                    state.phase_entry_time = t;
                } else {
                    let excess = w - base;
                    if excess > 0.0 && (excess - lifted).abs() <= spike {
                        self.lifted_sum += excess;
                        self.lifted_count += 1;
                        state.lifted_weight = self.lifted_sum / f64::from(self.lifted_count);
                    }
                }
            }
            Phase::PreLowering => {
                if w < base {
                    state.phase = Phase::Idle;
                    state.phase_entry_time = t;
                    event = Some(ActivityEvent {
                        kind: EventKind::Lowering,
                        t_ms: t,
                        lifted_kg: None,
                        base_kg: base,
                        detected_kg: w,
                    });
                    state.lifted_weight = 0.0;
                }
            }
        }

        self.state = Some(state);
        Ok(event)
    }

    /// Extend the held rise with a new sample, dropping the oldest samples
    /// until the held values span no more than `band`.
    ///
    /// The run is taken to start right after the last sample that is not part
    /// of it (`rise_anchor`).
    fn push_rise(&mut self, t: u64, w: f64, prev_t: u64, band: f64) {
        if self.rise.is_empty() {
            self.rise_anchor = prev_t;
        }
        self.rise.push_back((t, w));
        while self.rise.len() > 1 {
            let (lo, hi) = self
                .rise
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, v)| {
                    (lo.min(v), hi.max(v))
                });
            if hi - lo <= band {
                break;
            }
            if let Some((dropped, _)) = self.rise.pop_front() {
                self.rise_anchor = dropped;
            }
        }
    }
}
