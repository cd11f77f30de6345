//! Raw traces as CSV: `t_ms,L0,...,L7,R0,...,R7`, one row per frame, ADC
//! steps in each channel column.

use std::fmt::Write as _;
use std::path::Path;

use insole_core::estimation::CHANNELS;
use insole_core::{AdcReading, DividerCircuit, SampleFrame, SensorLayout};

use crate::error::{Error, Result};
use crate::files::read_string;

pub fn header() -> Vec<String> {
    let mut h = vec!["t_ms".to_string()];
    h.extend(SensorLayout.channel_ids().iter().map(|id| id.to_string()));
    h
}

pub fn read(path: &Path, circuit: &DividerCircuit) -> Result<Vec<SampleFrame>> {
    parse(path, &read_string(path)?, circuit)
}

pub fn parse(path: &Path, text: &str, circuit: &DividerCircuit) -> Result<Vec<SampleFrame>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::format(path, e.to_string()))?
        .clone();
    if headers.iter().ne(header().iter().map(String::as_str)) {
        return Err(Error::row(
            path,
            1,
            format!("expected header `{}`", header().join(",")),
        ));
    }

    let mut frames: Vec<SampleFrame> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::format(path, e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        let t_ms: u64 = record[0]
            .parse()
            .map_err(|_| Error::row(path, line, format!("bad t_ms `{}`", &record[0])))?;
        if let Some(prev) = frames.last() {
            if t_ms <= prev.t_ms {
                return Err(Error::row(
                    path,
                    line,
                    format!("t_ms {t_ms} does not increase (previous {})", prev.t_ms),
                ));
            }
        }
        let mut steps = [AdcReading::OPEN; CHANNELS];
        for (c, slot) in steps.iter_mut().enumerate() {
            let cell = &record[c + 1];
            let n: u32 = cell
                .parse()
                .map_err(|_| Error::row(path, line, format!("bad ADC value `{cell}`")))?;
            *slot = circuit
                .reading(n)
                .map_err(|e| Error::row(path, line, e.to_string()))?;
        }
        frames.push(SampleFrame { t_ms, steps });
    }
    if frames.is_empty() {
        return Err(Error::format(path, "no frames"));
    }
    Ok(frames)
}

pub fn to_csv(frames: &[SampleFrame]) -> String {
    let mut out = header().join(",");
    out.push('\n');
    for f in frames {
        let _ = write!(out, "{}", f.t_ms);
        for s in f.steps {
            let _ = write!(out, ",{}", s.steps());
        }
        out.push('\n');
    }
    out
}
