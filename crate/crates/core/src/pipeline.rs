//! Frames in, activity events out.

use alloc::vec::Vec;

use crate::detector::{ActivityEvent, Detector, DetectorConfig};
use crate::error::{Error, Result};
use crate::estimation::{
    register_baseline, ForceDecoder, SampleFrame, Smoother, WeightSample, DEFAULT_SMOOTHING_MS,
    STILL_WINDOW_MS,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BaseWeight {
    /// Register from the first still window of the trace.
    Auto,
    /// Use a known base weight, in kilograms.
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    pub smoothing_ms: u64,
    pub base: BaseWeight,
    pub detector: DetectorConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            smoothing_ms: DEFAULT_SMOOTHING_MS,
            base: BaseWeight::Auto,
            detector: DetectorConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionRun {
    pub base_weight_kg: f64,
    /// Still window the base was registered from; `None` for a fixed base.
    pub baseline_window_ms: Option<(u64, u64)>,
    /// Smoothed weight signal.
    pub samples: Vec<WeightSample>,
    pub events: Vec<ActivityEvent>,
}

/// Decode, smooth, register the base weight and run the detector.
///
/// Detection starts after the baseline window (or five seconds into the trace
/// for a fixed base), so no event can fire while the wearer is standing still
/// to be weighed.
pub fn run_detector(
    frames: &[SampleFrame],
    decoder: &ForceDecoder,
    config: &PipelineConfig,
) -> Result<DetectionRun> {
    let mut smoother = Smoother::new(config.smoothing_ms)?;
    let samples = frames
        .iter()
        .map(|f| smoother.push(decoder.decode(f)))
        .collect::<Result<Vec<_>>>()?;

    let first_t = samples.first().map(|s| s.t_ms).unwrap_or(0);
    let (base_weight_kg, baseline_window_ms, start_after) = match config.base {
        BaseWeight::Auto => {
            let b = register_baseline(&samples)?;
            (b.base_weight_kg, Some(b.window_ms), b.window_ms.1)
        }
        BaseWeight::Fixed(kg) => {
            if !(kg.is_finite() && kg > 0.0) {
                return Err(Error::InvalidParameter("base weight must be positive"));
            }
            (kg, None, first_t + STILL_WINDOW_MS)
        }
    };

    let mut detector = Detector::with_base(config.detector, base_weight_kg)?;
    let mut events = Vec::new();
    for s in samples.iter().filter(|s| s.t_ms > start_after) {
        if let Some(e) = detector.step(s)? {
            events.push(e);
        }
    }
    Ok(DetectionRun {
        base_weight_kg,
        baseline_window_ms,
        samples,
        events,
    })
}
