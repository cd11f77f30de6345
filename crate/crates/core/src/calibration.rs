//! Per-sensor force/resistance curves from compression-test sweeps.
//!
//! Curves are used as lookup tables for force estimation. The fitted `R / F`
//! constant is kept alongside for simulation and for the parallel-grouping
//! analysis.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::circuit::{FsrModel, Resistance, SENSOR_MAX_FORCE_N};
use crate::error::{Error, Result};
use crate::isotonic::isotonic_non_increasing;
use crate::SensorId;

/// One load step of a compression test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationPoint {
    pub force: f64,
    pub resistance: Resistance,
}

impl CalibrationPoint {
    pub fn new(force: f64, resistance_ohm: f64) -> Self {
        Self {
            force,
            resistance: Resistance::Ohms(resistance_ohm),
        }
    }

    pub fn open(force: f64) -> Self {
        Self {
            force,
            resistance: Resistance::Open,
        }
    }
}

/// A knot of a cleaned calibration curve.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CurvePoint {
    pub force_n: f64,
    pub resistance_ohm: f64,
}

/// Single-valued force/resistance table: forces strictly increasing,
/// resistances strictly decreasing, at least two knots.
#[derive(Debug, Clone, PartialEq)]
pub struct SensorCurve {
    sensor_id: SensorId,
    points: Vec<CurvePoint>,
}

impl SensorCurve {
    /// Wrap an already-clean point list, e.g. one read back from a curve store.
    pub fn from_points(sensor_id: impl Into<SensorId>, points: Vec<CurvePoint>) -> Result<Self> {
        let sensor_id = sensor_id.into();
        let fail = |reason: &str| Error::Calibration {
            sensor_id: sensor_id.clone(),
            reason: reason.to_string(),
        };
        if points.len() < 2 {
            return Err(fail("a curve needs at least 2 points"));
        }
        for p in &points {
            if !(p.force_n.is_finite() && p.force_n > 0.0) {
                return Err(fail("forces must be positive"));
            }
            if !(p.resistance_ohm.is_finite() && p.resistance_ohm > 0.0) {
                return Err(fail("resistances must be positive"));
            }
        }
        for w in points.windows(2) {
            if w[1].force_n <= w[0].force_n {
                return Err(fail("forces must be strictly increasing"));
            }
            if w[1].resistance_ohm >= w[0].resistance_ohm {
                return Err(fail("resistances must be strictly decreasing"));
            }
        }
        Ok(Self { sensor_id, points })
    }

    pub fn sensor_id(&self) -> &SensorId {
        &self.sensor_id
    }

    pub fn points(&self) -> &[CurvePoint] {
        &self.points
    }

    pub fn min_force(&self) -> f64 {
        self.points[0].force_n
    }

    pub fn max_force(&self) -> f64 {
        self.points[self.points.len() - 1].force_n
    }

    /// Force for a measured resistance by piecewise-linear lookup.
    ///
    /// Open circuits and resistances above the first knot read 0 N; anything
    /// below the last knot saturates at the largest tabulated force.
    pub fn interpolate_force(&self, resistance: Resistance) -> f64 {
        let r = match resistance {
            Resistance::Open => return 0.0,
            Resistance::Ohms(r) => r,
        };
        let first = self.points[0];
        let last = self.points[self.points.len() - 1];
        if r > first.resistance_ohm {
            return 0.0;
        }
        if r <= last.resistance_ohm {
            return last.force_n;
        }
        // First knot whose resistance is below r; its predecessor is at or above.
        let hi = self.points.partition_point(|p| p.resistance_ohm >= r);
        let (a, b) = (self.points[hi - 1], self.points[hi]);
        a.force_n
            + (a.resistance_ohm - r) / (a.resistance_ohm - b.resistance_ohm)
                * (b.force_n - a.force_n)
    }

    /// Resistance at `force` by linear interpolation between knots; `None`
    /// outside the tabulated range.
    pub fn resistance_at(&self, force: f64) -> Option<f64> {
        if force < self.min_force() || force > self.max_force() {
            return None;
        }
        let hi = self.points.partition_point(|p| p.force_n < force);
        let b = self.points[hi];
        if b.force_n == force {
            return Some(b.resistance_ohm);
        }
        let a = self.points[hi - 1];
        Some(
            a.resistance_ohm
                + (force - a.force_n) / (b.force_n - a.force_n)
                    * (b.resistance_ohm - a.resistance_ohm),
        )
    }

    /// Least-squares `r_const` of the `R / F` model over the knots:
    /// `sum(r_i / f_i) / sum(1 / f_i^2)`.
    pub fn fit_model_constant(&self) -> FsrModel {
        let (num, den) = self.points.iter().fold((0.0, 0.0), |(num, den), p| {
            (
                num + p.resistance_ohm / p.force_n,
                den + 1.0 / (p.force_n * p.force_n),
            )
        });
        FsrModel {
            sensor_id: self.sensor_id.clone(),
            r_const: num / den,
            min_force: 0.0,
            max_force: self.max_force(),
        }
    }
}

/// Clean a raw sweep into a [`SensorCurve`].
///
/// Zero-force and open-circuit rows are dropped, repeated force levels are
/// averaged, and non-monotone resistances are repaired with a weighted
/// isotonic fit. Ties left by the fit are broken by subtracting a tiny
/// relative step so the curve stays strictly decreasing.
pub fn build_curve(
    sensor_id: impl Into<SensorId>,
    raw_points: &[CalibrationPoint],
) -> Result<SensorCurve> {
    let sensor_id = sensor_id.into();
    let fail = |reason: alloc::string::String| Error::Calibration {
        sensor_id: sensor_id.clone(),
        reason,
    };

    let mut usable: Vec<(f64, f64)> = Vec::with_capacity(raw_points.len());
    for p in raw_points {
        if !(0.0..=SENSOR_MAX_FORCE_N).contains(&p.force) {
            return Err(fail(format!(
                "force {} N outside [0, {SENSOR_MAX_FORCE_N}] N",
                p.force
            )));
        }
        match p.resistance {
            Resistance::Open => continue,
            Resistance::Ohms(r) if !(r.is_finite() && r > 0.0) => {
                return Err(fail(format!("invalid resistance {r} ohm")));
            }
            Resistance::Ohms(r) => {
                if p.force > 0.0 {
                    usable.push((p.force, r));
                }
            }
        }
    }
    usable.sort_by(|a, b| a.0.total_cmp(&b.0));

    // Merge repeated force levels (e.g. load and unload passes).
    let mut forces: Vec<f64> = Vec::new();
    let mut sums: Vec<f64> = Vec::new();
    let mut counts: Vec<f64> = Vec::new();
    for (f, r) in usable {
        if forces.last() == Some(&f) {
            *sums.last_mut().unwrap() += r;
            *counts.last_mut().unwrap() += 1.0;
        } else {
            forces.push(f);
            sums.push(r);
            counts.push(1.0);
        }
    }
    if forces.len() < 2 {
        return Err(fail(format!(
            "need at least 2 loaded force levels, got {}",
            forces.len()
        )));
    }

    let means: Vec<f64> = sums.iter().zip(&counts).map(|(s, n)| s / n).collect();
    let fitted = isotonic_non_increasing(&means, &counts);
    let resistances = break_ties(&fitted);

    let points = forces
        .into_iter()
        .zip(resistances)
        .map(|(force_n, resistance_ohm)| CurvePoint {
            force_n,
            resistance_ohm,
        })
        .collect();
    SensorCurve::from_points(sensor_id, points)
}

/// Turn a non-increasing sequence into a strictly decreasing one by stepping
/// each repeated value down by a relative epsilon, never reaching the next
/// distinct value.
fn break_ties(values: &[f64]) -> Vec<f64> {
    const RELATIVE_EPS: f64 = 1e-9;
    let mut out = values.to_vec();
    let mut start = 0;
    while start < values.len() {
        let v = values[start];
        let mut end = start + 1;
        while end < values.len() && values[end] == v {
            end += 1;
        }
        let run = end - start;
        if run > 1 {
            let mut eps = v.abs() * RELATIVE_EPS;
            if end < values.len() {
                eps = eps.min((v - values[end]) / (run as f64 + 1.0));
            }
            for (k, slot) in out[start..end].iter_mut().enumerate() {
                *slot = v - k as f64 * eps;
            }
        }
        start = end;
    }
    out
}

/// Series resistance to add per sensor so each approaches the base sensor.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CompensationTable {
    pub base_sensor_id: SensorId,
    pub series_ohm: BTreeMap<SensorId, f64>,
}

impl CompensationTable {
    pub fn compensation(&self, sensor_id: &SensorId) -> Result<f64> {
        self.series_ohm
            .get(sensor_id)
            .copied()
            .ok_or_else(|| Error::UnknownSensor(sensor_id.clone()))
    }

    /// Add the sensor's series compensation. An open circuit stays open.
    pub fn apply(&self, sensor_id: &SensorId, resistance: Resistance) -> Result<Resistance> {
        let comp = self.compensation(sensor_id)?;
        Ok(match resistance {
            Resistance::Open => Resistance::Open,
            Resistance::Ohms(r) => Resistance::Ohms(r + comp),
        })
    }
}

/// Force levels shared by every curve: the common grid when all curves were
/// swept identically, otherwise every knot inside the overlapping range.
pub fn shared_force_levels(curves: &[SensorCurve]) -> Result<Vec<f64>> {
    let first = curves
        .first()
        .ok_or_else(|| Error::Equalization("no curves".to_string()))?;
    let same_grid = curves.iter().all(|c| {
        c.points.len() == first.points.len()
            && c.points
                .iter()
                .zip(&first.points)
                .all(|(a, b)| a.force_n == b.force_n)
    });
    if same_grid {
        return Ok(first.points.iter().map(|p| p.force_n).collect());
    }

    let lo = curves
        .iter()
        .map(|c| c.min_force())
        .fold(f64::MIN, f64::max);
    let hi = curves
        .iter()
        .map(|c| c.max_force())
        .fold(f64::MAX, f64::min);
    if lo >= hi {
        return Err(Error::Equalization(format!(
            "force ranges do not overlap (shared range [{lo}, {hi}] N)"
        )));
    }
    let mut grid: Vec<f64> = curves
        .iter()
        .flat_map(|c| c.points.iter().map(|p| p.force_n))
        .filter(|f| (lo..=hi).contains(f))
        .collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    Ok(grid)
}

fn resample(curve: &SensorCurve, grid: &[f64]) -> Vec<f64> {
    grid.iter()
        .map(|&f| {
            curve
                .resistance_at(f)
                .expect("grid lies inside every curve")
        })
        .collect()
}

/// Pick the least sensitive sensor (highest mean resistance over the shared
/// levels; lowest id wins ties) and give every other sensor the mean gap to
/// it as series compensation, floored at zero.
pub fn equalize(curves: &[SensorCurve]) -> Result<CompensationTable> {
    if curves.len() < 2 {
        return Err(Error::Equalization(format!(
            "need at least 2 sensors, got {}",
            curves.len()
        )));
    }
    let mut sorted: Vec<&SensorCurve> = curves.iter().collect();
    sorted.sort_by(|a, b| a.sensor_id.cmp(&b.sensor_id));
    if sorted.windows(2).any(|w| w[0].sensor_id == w[1].sensor_id) {
        return Err(Error::Equalization("duplicate sensor id".to_string()));
    }

    let grid = shared_force_levels(curves)?;
    let n = grid.len() as f64;
    let means: Vec<f64> = sorted
        .iter()
        .map(|c| resample(c, &grid).iter().sum::<f64>() / n)
        .collect();

    let mut base = 0;
    for (i, &m) in means.iter().enumerate() {
        if m > means[base] {
            base = i;
        }
    }

    let series_ohm = sorted
        .iter()
        .zip(&means)
        .enumerate()
        .map(|(i, (c, &m))| {
            let comp = if i == base {
                0.0
            } else {
                (means[base] - m).max(0.0)
            };
            (c.sensor_id.clone(), comp)
        })
        .collect();
    Ok(CompensationTable {
        base_sensor_id: sorted[base].sensor_id.clone(),
        series_ohm,
    })
}

/// Mean absolute pairwise resistance difference between sensors, averaged over
/// the shared force levels, optionally after compensation.
pub fn resistance_spread(curves: &[SensorCurve], table: Option<&CompensationTable>) -> Result<f64> {
    let grid = shared_force_levels(curves)?;
    let mut columns = Vec::with_capacity(curves.len());
    for c in curves {
        let offset = match table {
            Some(t) => t.compensation(&c.sensor_id)?,
            None => 0.0,
        };
        columns.push(
            resample(c, &grid)
                .into_iter()
                .map(|r| r + offset)
                .collect::<Vec<_>>(),
        );
    }
    if columns.len() < 2 {
        return Ok(0.0);
    }
    let pairs = (columns.len() * (columns.len() - 1) / 2) as f64;
    let mut total = 0.0;
    for level in 0..grid.len() {
        let mut sum = 0.0;
        for i in 0..columns.len() {
            for j in i + 1..columns.len() {
                sum += (columns[i][level] - columns[j][level]).abs();
            }
        }
        total += sum / pairs;
    }
    Ok(total / grid.len() as f64)
}

/// Result of reading a group of sensors wired in parallel as one channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParallelReport {
    pub module_resistance: Resistance,
    /// Reference constant used to turn the module resistance back into force
    /// (the arithmetic mean of the members' constants).
    pub reference_r_const: f64,
    pub grouped_force: f64,
    pub true_force: f64,
    /// `grouped_force - true_force`.
    pub discrepancy: f64,
}

/// Compare reading a sensor group through one parallel channel with summing
/// the members individually.
///
/// Member conductances add (`1/R_module = sum 1/R_i`). The module reading is
/// converted back to force through a shared reference model whose constant is
/// the mean of the members'. That is exact only when every constant is equal.
pub fn combine_parallel_analysis(models: &[FsrModel], forces: &[f64]) -> Result<ParallelReport> {
    if models.len() != forces.len() {
        return Err(Error::LengthMismatch {
            expected: models.len(),
            got: forces.len(),
        });
    }
    if models.is_empty() {
        return Err(Error::InvalidParameter("need at least one sensor"));
    }
    let mut conductance = 0.0;
    let mut true_force = 0.0;
    for (model, &force) in models.iter().zip(forces) {
        if let Resistance::Ohms(r) = model.resistance_from_force(force)? {
            conductance += 1.0 / r;
        }
        // What an individually-read sensor would report, saturation included.
        true_force += model.force_from_resistance(model.resistance_from_force(force)?);
    }
    let reference_r_const = models.iter().map(|m| m.r_const).sum::<f64>() / models.len() as f64;
    let (module_resistance, grouped_force) = if conductance > 0.0 {
        (
            Resistance::Ohms(1.0 / conductance),
            reference_r_const * conductance,
        )
    } else {
        (Resistance::Open, 0.0)
    };
    Ok(ParallelReport {
        module_resistance,
        reference_r_const,
        grouped_force,
        true_force,
        discrepancy: grouped_force - true_force,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn pts(raw: &[(f64, f64)]) -> Vec<CalibrationPoint> {
        raw.iter()
            .map(|&(f, r)| CalibrationPoint::new(f, r))
            .collect()
    }

    fn curve(id: &str, raw: &[(f64, f64)]) -> SensorCurve {
        build_curve(id, &pts(raw)).unwrap()
    }

    #[test]
    fn monotone_input_kept() {
        let c = curve("a", &[(9.8, 9000.0), (19.6, 5000.0), (29.4, 3500.0)]);
        let r: Vec<f64> = c.points().iter().map(|p| p.resistance_ohm).collect();
        assert_eq!(r, vec![9000.0, 5000.0, 3500.0]);
    }

    #[test]
    fn violation_pooled_then_split() {
        let c = curve("a", &[(9.8, 9000.0), (19.6, 9200.0), (29.4, 3500.0)]);
        let p = c.points();
        assert_eq!(p[0].resistance_ohm, 9100.0);
        assert!(p[1].resistance_ohm < 9100.0);
        assert!(9100.0 - p[1].resistance_ohm < 1e-3);
        assert_eq!(p[2].resistance_ohm, 3500.0);
    }

    #[test]
    fn unsorted_and_repeated_levels() {
        let c = curve(
            "a",
            &[
                (19.6, 5200.0),
                (9.8, 9000.0),
                (19.6, 4800.0),
                (29.4, 3500.0),
            ],
        );
        let f: Vec<f64> = c.points().iter().map(|p| p.force_n).collect();
        assert_eq!(f, vec![9.8, 19.6, 29.4]);
        assert_eq!(c.points()[1].resistance_ohm, 5000.0);
    }

    #[test]
    fn open_only_is_an_error() {
        let err = build_curve("a", &[CalibrationPoint::open(0.0)]).unwrap_err();
        assert!(matches!(err, Error::Calibration { .. }));
    }

    #[test]
    fn zero_force_rows_dropped() {
        let raw = [
            CalibrationPoint::open(0.0),
            CalibrationPoint::new(9.8, 9000.0),
            CalibrationPoint::new(19.6, 5000.0),
        ];
        assert_eq!(build_curve("a", &raw).unwrap().points().len(), 2);
    }

    #[test]
    fn out_of_range_force_rejected() {
        assert!(build_curve("a", &pts(&[(9.8, 9000.0), (450.0, 100.0)])).is_err());
        assert!(build_curve("a", &pts(&[(9.8, 9000.0), (19.6, -1.0)])).is_err());
    }

    #[test]
    fn all_equal_resistances_still_strict() {
        let c = curve("a", &[(9.8, 1000.0), (19.6, 1000.0), (29.4, 1000.0)]);
        assert!(c
            .points()
            .windows(2)
            .all(|w| w[1].resistance_ohm < w[0].resistance_ohm));
    }

    #[test]
    fn lookup_examples() {
        let c = curve("a", &[(9.8, 9000.0), (19.6, 5000.0)]);
        assert_eq!(c.interpolate_force(Resistance::Ohms(9000.0)), 9.8);
        assert_eq!(c.interpolate_force(Resistance::Ohms(5000.0)), 19.6);
        assert!((c.interpolate_force(Resistance::Ohms(7000.0)) - 14.7).abs() < 1e-12);
        assert_eq!(c.interpolate_force(Resistance::Open), 0.0);
        assert_eq!(c.interpolate_force(Resistance::Ohms(9500.0)), 0.0);
        assert_eq!(c.interpolate_force(Resistance::Ohms(10.0)), 19.6);
    }

    #[test]
    fn lookup_hits_every_knot() {
        let c = curve(
            "a",
            &[
                (9.8, 9000.0),
                (19.6, 5000.0),
                (29.4, 3500.0),
                (39.2, 2000.0),
            ],
        );
        for p in c.points() {
            assert_eq!(
                c.interpolate_force(Resistance::Ohms(p.resistance_ohm)),
                p.force_n
            );
        }
    }

    #[test]
    fn forward_interpolation() {
        let c = curve("a", &[(10.0, 9000.0), (20.0, 5000.0)]);
        assert_eq!(c.resistance_at(15.0), Some(7000.0));
        assert_eq!(c.resistance_at(10.0), Some(9000.0));
        assert_eq!(c.resistance_at(20.0), Some(5000.0));
        assert_eq!(c.resistance_at(9.0), None);
    }

    #[test]
    fn fit_exact_model() {
        let c = curve("a", &[(1.0, 2.0), (2.0, 1.0), (4.0, 0.5)]);
        assert!((c.fit_model_constant().r_const - 2.0).abs() < 1e-12);
    }

    #[test]
    fn fit_two_points() {
        let c = curve("a", &[(1.0, 10.0), (2.0, 4.0)]);
        let m = c.fit_model_constant();
        assert!((m.r_const - 9.6).abs() < 1e-12);
        assert_eq!(m.max_force, 2.0);
    }

    #[test]
    fn equalize_constant_offset() {
        let a = curve("A", &[(10.0, 900.0), (20.0, 500.0), (30.0, 300.0)]);
        let b = curve("B", &[(10.0, 1000.0), (20.0, 600.0), (30.0, 400.0)]);
        let t = equalize(&[a, b]).unwrap();
        assert_eq!(t.base_sensor_id, SensorId::from("B"));
        assert!((t.compensation(&"A".into()).unwrap() - 100.0).abs() < 1e-9);
        assert_eq!(t.compensation(&"B".into()).unwrap(), 0.0);
    }

    #[test]
    fn equalize_identical_picks_lowest_id() {
        let raw = [(10.0, 900.0), (20.0, 500.0)];
        let t = equalize(&[curve("Z", &raw), curve("M", &raw), curve("Q", &raw)]).unwrap();
        assert_eq!(t.base_sensor_id, SensorId::from("M"));
        assert!(t.series_ohm.values().all(|&c| c == 0.0));
    }

    #[test]
    fn equalize_needs_two_and_overlap() {
        let a = curve("A", &[(10.0, 900.0), (20.0, 500.0)]);
        let b = curve("B", &[(30.0, 900.0), (40.0, 500.0)]);
        assert!(equalize(core::slice::from_ref(&a)).is_err());
        assert!(matches!(equalize(&[a, b]), Err(Error::Equalization(_))));
    }

    #[test]
    fn equalize_resamples_mismatched_grids() {
        let a = curve("A", &[(10.0, 1000.0), (30.0, 600.0)]);
        let b = curve("B", &[(10.0, 900.0), (20.0, 700.0), (40.0, 300.0)]);
        let grid = shared_force_levels(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(grid, vec![10.0, 20.0, 30.0]);
        let t = equalize(&[a, b]).unwrap();
        // A resampled: 1000, 800, 600; B: 900, 700, 500.
        assert_eq!(t.base_sensor_id, SensorId::from("A"));
        assert!((t.compensation(&"B".into()).unwrap() - 100.0).abs() < 1e-9);
    }

    #[test]
    fn apply_compensation_examples() {
        let mut series_ohm = BTreeMap::new();
        series_ohm.insert(SensorId::from("Lf2"), 0.0);
        series_ohm.insert(SensorId::from("Lf1"), 127.44);
        let t = CompensationTable {
            base_sensor_id: "Lf2".into(),
            series_ohm,
        };
        assert_eq!(
            t.apply(&"Lf2".into(), Resistance::Ohms(3000.0)).unwrap(),
            Resistance::Ohms(3000.0)
        );
        let r = t
            .apply(&"Lf1".into(), Resistance::Ohms(3000.0))
            .unwrap()
            .ohms()
            .unwrap();
        assert!((r - 3127.44).abs() < 1e-9);
        assert_eq!(
            t.apply(&"Lf1".into(), Resistance::Open).unwrap(),
            Resistance::Open
        );
        assert!(matches!(
            t.apply(&"nope".into(), Resistance::Ohms(1.0)),
            Err(Error::UnknownSensor(_))
        ));
    }

    #[test]
    fn parallel_equal_constants_is_exact() {
        let models: Vec<FsrModel> = (0..4)
            .map(|i| FsrModel::with_constant(format!("s{i}"), 600_000.0).unwrap())
            .collect();
        let r = combine_parallel_analysis(&models, &[10.0, 25.0, 40.0, 77.0]).unwrap();
        assert!(r.discrepancy.abs() <= 1e-9, "{}", r.discrepancy);
        assert!((r.true_force - 152.0).abs() < 1e-12);
    }

    #[test]
    fn parallel_unequal_constants_disagree() {
        let models = [
            FsrModel::with_constant("a", 600_000.0).unwrap(),
            FsrModel::with_constant("b", 300_000.0).unwrap(),
        ];
        let r = combine_parallel_analysis(&models, &[50.0, 50.0]).unwrap();
        // mean constant 450000 * (50/600000 + 50/300000) = 112.5 vs 100
        assert!((r.grouped_force - 112.5).abs() < 1e-9);
        assert!((r.discrepancy - 12.5).abs() < 1e-9);
    }

    #[test]
    fn parallel_single_and_unloaded() {
        let m = [FsrModel::with_constant("a", 123_456.0).unwrap()];
        assert!(
            combine_parallel_analysis(&m, &[42.0])
                .unwrap()
                .discrepancy
                .abs()
                < 1e-9
        );
        let r = combine_parallel_analysis(&m, &[0.0]).unwrap();
        assert_eq!(r.module_resistance, Resistance::Open);
        assert_eq!(r.discrepancy, 0.0);
        assert!(combine_parallel_analysis(&m, &[1.0, 2.0]).is_err());
    }
}
