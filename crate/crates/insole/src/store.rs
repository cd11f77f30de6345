//! The curve store: one JSON document holding every sensor's cleaned curve,
//! its fitted constant, and the optional compensation table.
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "sensors": {
//!     "L0": { "r_const_ohm_n": 598211.4, "points": [{ "force_n": 9.8, "resistance_ohm": 61043.0 }] }
//!   },
//!   "compensation": { "base_sensor_id": "L3", "series_ohm": { "L0": 127.4, "L3": 0.0 } }
//! }
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use insole_core::calibration::build_curve;
use insole_core::estimation::ForceDecoder;
use insole_core::{
    CompensationTable, CurvePoint, DividerCircuit, FsrModel, SensorCurve, SensorId, SensorLayout,
};
use serde::{Deserialize, Serialize};

use crate::calibration_csv::Sweeps;
use crate::error::{Error, Result};
use crate::files::{read_string, write_atomic};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoredCurve {
    pub r_const_ohm_n: f64,
    pub points: Vec<CurvePoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveStore {
    pub format_version: u32,
    pub sensors: BTreeMap<SensorId, StoredCurve>,
    #[serde(default)]
    pub compensation: Option<CompensationTable>,
}

impl CurveStore {
    /// Clean every sweep, fit its constant and optionally equalize.
    pub fn from_sweeps(sweeps: &Sweeps, equalize: bool) -> Result<Self> {
        let curves = sweeps
            .iter()
            .map(|(id, pts)| build_curve(id.clone(), pts))
            .collect::<insole_core::Result<Vec<_>>>()?;
        let compensation = if equalize {
            Some(insole_core::calibration::equalize(&curves)?)
        } else {
            None
        };
        let sensors = curves
            .into_iter()
            .map(|c| {
                let stored = StoredCurve {
                    r_const_ohm_n: c.fit_model_constant().r_const,
                    points: c.points().to_vec(),
                };
                (c.sensor_id().clone(), stored)
            })
            .collect();
        Ok(Self {
            format_version: FORMAT_VERSION,
            sensors,
            compensation,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let store: Self = serde_json::from_str(&read_string(path)?)
            .map_err(|e| Error::format(path, e.to_string()))?;
        if store.format_version != FORMAT_VERSION {
            return Err(Error::format(
                path,
                format!("unsupported format_version {}", store.format_version),
            ));
        }
        store.curves().map_err(|e| Error::model(path, e))?;
        Ok(store)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_json().as_bytes())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("curve store serializes");
        s.push('\n');
        s
    }

    pub fn curves(&self) -> insole_core::Result<BTreeMap<SensorId, SensorCurve>> {
        self.sensors
            .iter()
            .map(|(id, c)| {
                Ok((
                    id.clone(),
                    SensorCurve::from_points(id.clone(), c.points.clone())?,
                ))
            })
            .collect()
    }

    /// One fitted model per insole channel, in channel order.
    pub fn channel_models(&self) -> insole_core::Result<Vec<FsrModel>> {
        SensorLayout
            .channel_ids()
            .into_iter()
            .map(|id| {
                let c = self
                    .sensors
                    .get(&id)
                    .ok_or_else(|| insole_core::Error::MissingCurve(id.clone()))?;
                let max_force = c.points.last().map_or(0.0, |p| p.force_n);
                FsrModel::new(id, c.r_const_ohm_n, 0.0, max_force)
            })
            .collect()
    }

    pub fn decoder(&self, circuit: DividerCircuit) -> insole_core::Result<ForceDecoder> {
        ForceDecoder::new(circuit, &self.curves()?, self.compensation.as_ref())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use insole_core::CalibrationPoint;

    fn sweeps(n: usize) -> Sweeps {
        (0..n)
            .map(|i| {
                let r = 500_000.0 + 20_000.0 * i as f64;
                let pts = (0..=45)
                    .map(|k| {
                        let f = 9.8 * k as f64;
                        if k == 0 {
                            CalibrationPoint::open(0.0)
                        } else {
                            CalibrationPoint::new(f.min(441.0), r / f)
                        }
                    })
                    .collect();
                (SensorId::from(format!("S{i}")), pts)
            })
            .collect()
    }

    #[test]
    fn json_round_trip() {
        let store = CurveStore::from_sweeps(&sweeps(3), true).unwrap();
        let back: CurveStore = serde_json::from_str(&store.to_json()).unwrap();
        assert_eq!(back, store);
        let comp = store.compensation.as_ref().unwrap();
        assert_eq!(comp.base_sensor_id.as_str(), "S2");
        assert!((store.sensors[&SensorId::from("S1")].r_const_ohm_n - 520_000.0).abs() < 1e-6);
    }

    #[test]
    fn equalize_needs_two_sensors() {
        assert!(CurveStore::from_sweeps(&sweeps(1), true).is_err());
        assert!(CurveStore::from_sweeps(&sweeps(1), false).is_ok());
    }

    #[test]
    fn wrong_version_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("curves.json");
        let mut store = CurveStore::from_sweeps(&sweeps(2), false).unwrap();
        store.format_version = 9;
        store.save(&p).unwrap();
        assert!(CurveStore::load(&p)
            .unwrap_err()
            .to_string()
            .contains("format_version"));
    }
}
