//! Detected events as JSON lines and ground truth as a JSON document.

use std::path::Path;

use insole_core::report::EventRecord;
use insole_core::GroundTruth;

use crate::error::{Error, Result};
use crate::files::read_string;

pub fn to_jsonl(events: &[EventRecord]) -> String {
    events
        .iter()
        .map(|e| serde_json::to_string(e).expect("event serializes") + "\n")
        .collect()
}

/// Read events; an empty file is an empty run.
pub fn read_events(path: &Path) -> Result<Vec<EventRecord>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_events(path, &text)
}

pub fn parse_events(path: &Path, text: &str) -> Result<Vec<EventRecord>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| Error::row(path, i as u64 + 1, e.to_string()))
        })
        .collect()
}

pub fn truth_to_json(truth: &GroundTruth) -> String {
    let mut s = serde_json::to_string_pretty(truth).expect("truth serializes");
    s.push('\n');
    s
}

pub fn read_truth(path: &Path) -> Result<GroundTruth> {
    serde_json::from_str(&read_string(path)?).map_err(|e| Error::format(path, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use insole_core::EventKind;

    #[test]
    fn jsonl_round_trip() {
        let events = vec![
            EventRecord {
                kind: EventKind::Lifting,
                t_ms: 12400,
                lifted_kg: Some(18.4),
                base_kg: 83.5,
                detected_kg: Some(101.9),
            },
            EventRecord {
                kind: EventKind::Lowering,
                t_ms: 19600,
                lifted_kg: None,
                base_kg: 83.5,
                detected_kg: Some(83.3),
            },
        ];
        let text = to_jsonl(&events);
        assert!(text
            .lines()
            .next()
            .unwrap()
            .starts_with(r#"{"kind":"LIFTING","t_ms":12400"#));
        assert!(text.contains(r#""lifted_kg":null"#));
        assert_eq!(parse_events(Path::new("e.jsonl"), &text).unwrap(), events);
    }

    #[test]
    fn bad_line_is_reported() {
        let msg = parse_events(Path::new("e.jsonl"), "\n{\"kind\":\"JUMP\"}\n")
            .unwrap_err()
            .to_string();
        assert!(msg.contains("line 2"), "{msg}");
    }
}
