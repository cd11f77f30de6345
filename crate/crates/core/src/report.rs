//! Detected events scored against ground truth.
//!
//! Error percentages are `(detected - truth) / truth * 100`. A LIFTING event
//! is scored on its load estimate. A LOWERING event is scored on the weight
//! read when it fired, against the base weight it was detected with.

use alloc::vec::Vec;

use crate::detector::{ActivityEvent, EventKind};
use crate::traces::GroundTruth;

/// One detected event as stored on disk; optional fields may be missing in
/// hand-made fixtures.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EventRecord {
    pub kind: EventKind,
    pub t_ms: u64,
    pub lifted_kg: Option<f64>,
    pub base_kg: f64,
    #[cfg_attr(feature = "serde", serde(default))]
    pub detected_kg: Option<f64>,
}

impl From<&ActivityEvent> for EventRecord {
    fn from(e: &ActivityEvent) -> Self {
        Self {
            kind: e.kind,
            t_ms: e.t_ms,
            lifted_kg: e.lifted_kg,
            base_kg: e.base_kg,
            detected_kg: Some(e.detected_kg),
        }
    }
}

/// Acceptance envelopes, in percent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub lift_pct: f64,
    pub base_pct: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            lift_pct: 15.0,
            base_pct: 5.0,
        }
    }
}

pub fn error_pct(detected: f64, truth: f64) -> f64 {
    (detected - truth) / truth * 100.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventMatch {
    pub kind: EventKind,
    pub truth_t_ms: u64,
    pub detected_t_ms: u64,
    /// LIFTING: the true load. LOWERING: the base weight.
    pub expected_kg: f64,
    /// LIFTING: the load estimate. LOWERING: the weight read when it fired.
    pub measured_kg: Option<f64>,
    pub error_pct: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub detected_count: usize,
    pub truth_count: usize,
    /// Detected kinds equal the truth kinds in order, and alternate.
    pub sequence_ok: bool,
    pub matches: Vec<EventMatch>,
    pub base_weight_kg: Option<f64>,
    /// Registered base weight vs the subject's true weight.
    pub base_error_pct: Option<f64>,
    pub base_pass: bool,
    pub tolerances: Tolerances,
    pub pass: bool,
}

pub fn build_report(
    events: &[EventRecord],
    truth: &GroundTruth,
    tolerances: Tolerances,
) -> RunReport {
    let alternating = events.windows(2).all(|w| w[0].kind != w[1].kind)
        && events.first().is_none_or(|e| e.kind == EventKind::Lifting);
    let same_kinds = events.len() == truth.events.len()
        && events
            .iter()
            .zip(&truth.events)
            .all(|(d, t)| d.kind == t.kind);
    let sequence_ok = alternating && same_kinds;

    let matches: Vec<EventMatch> = events
        .iter()
        .zip(&truth.events)
        .map(|(d, t)| {
            let (expected_kg, measured_kg) = match d.kind {
                EventKind::Lifting => (t.load_kg, d.lifted_kg),
                EventKind::Lowering => (d.base_kg, d.detected_kg),
            };
            let error = measured_kg.map(|kg| error_pct(kg, expected_kg));
            let limit = match d.kind {
                EventKind::Lifting => tolerances.lift_pct,
                EventKind::Lowering => tolerances.base_pct,
            };
            let pass = d.kind == t.kind
                && match (d.kind, error) {
                    (_, Some(e)) => e.abs() <= limit,
                    // a lift without an estimate cannot be scored
                    (EventKind::Lifting, None) => false,
                    (EventKind::Lowering, None) => true,
                };
            EventMatch {
                kind: d.kind,
                truth_t_ms: t.t_ms,
                detected_t_ms: d.t_ms,
                expected_kg,
                measured_kg,
                error_pct: error,
                pass,
            }
        })
        .collect();

    let base_weight_kg = events.first().map(|e| e.base_kg);
    let base_error_pct = base_weight_kg.map(|b| error_pct(b, truth.subject_weight_kg));
    let base_pass = base_error_pct.is_none_or(|e| e.abs() <= tolerances.base_pct);
    let pass = sequence_ok && base_pass && matches.iter().all(|m| m.pass);

    RunReport {
        detected_count: events.len(),
        truth_count: truth.events.len(),
        sequence_ok,
        matches,
        base_weight_kg,
        base_error_pct,
        base_pass,
        tolerances,
        pass,
    }
}
