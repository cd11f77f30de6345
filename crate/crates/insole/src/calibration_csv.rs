//! Calibration sweeps as CSV: `sensor_id,force_n,resistance_ohm`.
//!
//! An open circuit is written as `open`; `inf` and an empty cell read the same.

use std::collections::BTreeMap;
use std::path::Path;

use insole_core::{CalibrationPoint, Resistance, SensorId};

use crate::error::{Error, Result};
use crate::files::read_string;

pub const HEADER: [&str; 3] = ["sensor_id", "force_n", "resistance_ohm"];

pub type Sweeps = BTreeMap<SensorId, Vec<CalibrationPoint>>;

pub fn read(path: &Path) -> Result<Sweeps> {
    parse(path, &read_string(path)?)
}

pub fn parse(path: &Path, text: &str) -> Result<Sweeps> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::format(path, e.to_string()))?
        .clone();
    if headers.iter().collect::<Vec<_>>() != HEADER {
        return Err(Error::row(
            path,
            1,
            format!("expected header `{}`", HEADER.join(",")),
        ));
    }

    let mut sweeps = Sweeps::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::format(path, e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        let id = &record[0];
        if id.is_empty() {
            return Err(Error::row(path, line, "empty sensor_id"));
        }
        let force: f64 = record[1]
            .parse()
            .map_err(|_| Error::row(path, line, format!("bad force `{}`", &record[1])))?;
        let resistance = match record[2].to_ascii_lowercase().as_str() {
            "" | "open" | "inf" => Resistance::Open,
            cell => Resistance::Ohms(
                cell.parse()
                    .map_err(|_| Error::row(path, line, format!("bad resistance `{cell}`")))?,
            ),
        };
        sweeps
            .entry(SensorId::from(id))
            .or_default()
            .push(CalibrationPoint { force, resistance });
    }
    if sweeps.is_empty() {
        return Err(Error::format(path, "no calibration rows"));
    }
    Ok(sweeps)
}

pub fn to_csv(sweeps: &Sweeps) -> String {
    let mut out = HEADER.join(",");
    out.push('\n');
    for (id, points) in sweeps {
        for p in points {
            let r = match p.resistance {
                Resistance::Ohms(r) => r.to_string(),
                Resistance::Open => "open".to_string(),
            };
            out.push_str(&format!("{id},{},{r}\n", p.force));
        }
    }
    out
}
