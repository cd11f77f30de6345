//! Regenerates the synthetic calibration sweep used by the tests:
//! `cargo run -p insole --example make_fixtures -- crates/insole/tests/fixtures`

use std::path::PathBuf;

use insole::calibration_csv::{self, Sweeps};
use insole::insole_core::{CalibrationPoint, SensorLayout};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    let mut rng = ChaCha8Rng::seed_from_u64(2016);
    let mut sweeps = Sweeps::new();
    for (c, id) in SensorLayout.channel_ids().into_iter().enumerate() {
        let r_const = 540_000.0 + 8_000.0 * c as f64;
        let mut points = vec![CalibrationPoint::open(0.0)];
        for k in 1..=45 {
            let f = (980.0 * k as f64).round() / 100.0;
            let jitter = 1.0 + rng.random_range(-0.01..0.01);
            points.push(CalibrationPoint::new(f, (r_const / f * jitter).round()));
        }
        // a repeated load and a reading that bounces back up
        points.push(CalibrationPoint::new(98.0, (r_const / 98.0).round()));
        points[20].resistance = points[19].resistance;
        sweeps.insert(id, points);
    }
    let path = dir.join("calibration.csv");
    std::fs::write(&path, calibration_csv::to_csv(&sweeps)).unwrap();
    println!("wrote {}", path.display());
}
