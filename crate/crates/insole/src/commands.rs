//! The four CLI commands as library calls.

use std::fmt::Write as _;
use std::path::Path;

use insole_core::report::{build_report, EventRecord, RunReport, Tolerances};
use insole_core::traces::{generate_trace, GeneratedTrace};
use insole_core::{run_detector, BaseWeight, DetectionRun, DividerCircuit, PipelineConfig};
use log::{debug, info};

use crate::error::{Error, Result};
use crate::files::write_atomic;
use crate::scenario::Scenario;
use crate::store::CurveStore;
use crate::{calibration_csv, events, trace_csv};

pub fn calibrate(input: &Path, out: &Path, equalize: bool) -> Result<CurveStore> {
    let sweeps = calibration_csv::read(input)?;
    info!("{} sensors read from {}", sweeps.len(), input.display());
    let store = CurveStore::from_sweeps(&sweeps, equalize).map_err(|e| match e {
        Error::Core(c) => Error::model(input, c),
        e => e,
    })?;
    if let Some(table) = &store.compensation {
        info!("base sensor {}", table.base_sensor_id);
        for (id, ohm) in &table.series_ohm {
            debug!("compensation {id}: {ohm:.2} ohm");
        }
    }
    store.save(out)?;
    Ok(store)
}

pub fn simulate(
    spec: &Path,
    curves: &Path,
    out: &Path,
    truth: &Path,
    seed: Option<u64>,
) -> Result<GeneratedTrace> {
    let scenario = Scenario::load(spec)?;
    let store = CurveStore::load(curves)?;
    let models = store
        .channel_models()
        .map_err(|e| Error::model(curves, e))?;
    let mut trace_spec = scenario.to_spec(models, DividerCircuit::default());
    if let Some(seed) = seed {
        trace_spec.seed = seed;
    }
    let trace = generate_trace(&trace_spec).map_err(|e| Error::model(spec, e))?;
    info!(
        "{} frames, {} truth events",
        trace.frames.len(),
        trace.truth.events.len()
    );
    write_atomic(out, trace_csv::to_csv(&trace.frames).as_bytes())?;
    write_atomic(truth, events::truth_to_json(&trace.truth).as_bytes())?;
    Ok(trace)
}

pub fn detect(trace: &Path, curves: &Path, base: BaseWeight, out: &Path) -> Result<DetectionRun> {
    let store = CurveStore::load(curves)?;
    let circuit = DividerCircuit::default();
    let decoder = store
        .decoder(circuit)
        .map_err(|e| Error::model(curves, e))?;
    let frames = trace_csv::read(trace, &circuit)?;
    let config = PipelineConfig {
        base,
        ..PipelineConfig::default()
    };
    let run = run_detector(&frames, &decoder, &config).map_err(|e| Error::model(trace, e))?;
    info!("base weight {:.2} kg", run.base_weight_kg);
    let records: Vec<EventRecord> = run.events.iter().map(EventRecord::from).collect();
    for r in &records {
        debug!("{:?} at {} ms", r.kind, r.t_ms);
    }
    write_atomic(out, events::to_jsonl(&records).as_bytes())?;
    Ok(run)
}

pub fn report(events_path: &Path, truth_path: &Path, tolerances: Tolerances) -> Result<RunReport> {
    let detected = events::read_events(events_path)?;
    let truth = events::read_truth(truth_path)?;
    Ok(build_report(&detected, &truth, tolerances))
}

fn fmt_opt(v: Option<f64>, digits: usize) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:+.digits$}"))
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn render_report(r: &RunReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<4} {:<9} {:>10} {:>10} {:>10} {:>10} {:>8}  result",
        "#", "kind", "truth_ms", "found_ms", "expect_kg", "found_kg", "error_%"
    );
    for (i, m) in r.matches.iter().enumerate() {
        let kind = match m.kind {
            insole_core::EventKind::Lifting => "LIFTING",
            insole_core::EventKind::Lowering => "LOWERING",
        };
        let _ = writeln!(
            s,
            "{:<4} {:<9} {:>10} {:>10} {:>10.2} {:>10} {:>8}  {}",
            i + 1,
            kind,
            m.truth_t_ms,
            m.detected_t_ms,
            m.expected_kg,
            m.measured_kg.map_or("-".to_string(), |x| format!("{x:.2}")),
            fmt_opt(m.error_pct, 2),
            verdict(m.pass)
        );
    }
    let _ = writeln!(
        s,
        "events: {} detected, {} expected, sequence {}",
        r.detected_count,
        r.truth_count,
        if r.sequence_ok { "ok" } else { "MISMATCH" }
    );
    if let Some(b) = r.base_weight_kg {
        let _ = writeln!(
            s,
            "base weight: {b:.2} kg, error {}% {}",
            fmt_opt(r.base_error_pct, 2),
            verdict(r.base_pass)
        );
    }
    let _ = writeln!(
        s,
        "tolerances: lift {}%, base {}%",
        r.tolerances.lift_pct, r.tolerances.base_pct
    );
    let _ = writeln!(s, "{}", verdict(r.pass));
    s
}
