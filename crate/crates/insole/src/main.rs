use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use insole::commands;
use insole::insole_core::report::Tolerances;
use insole::insole_core::BaseWeight;

/// FSR insole calibration, simulation, lift/lower detection and scoring.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a curve store from a calibration CSV.
    Calibrate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Add series compensation so all sensors match the least sensitive one.
        #[arg(long)]
        equalize: bool,
    },
    /// Generate a synthetic trace and its ground truth from a scenario.
    Simulate {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        curves: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        truth: PathBuf,
        /// Override the scenario's noise seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Detect lifting and lowering events in a trace.
    Detect {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        curves: PathBuf,
        /// Base weight in kg, or `auto` to register it from the first still window.
        #[arg(long, default_value = "auto", value_parser = parse_base)]
        base: BaseWeight,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score detected events against ground truth.
    Report {
        #[arg(long)]
        events: PathBuf,
        #[arg(long)]
        truth: PathBuf,
        #[arg(long, default_value_t = 15.0)]
        tol_lift: f64,
        #[arg(long, default_value_t = 5.0)]
        tol_base: f64,
    },
}

fn parse_base(s: &str) -> Result<BaseWeight, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(BaseWeight::Auto);
    }
    match s.parse::<f64>() {
        Ok(kg) if kg.is_finite() && kg > 0.0 => Ok(BaseWeight::Fixed(kg)),
        _ => Err(format!(
            "expected `auto` or a positive weight in kg, got `{s}`"
        )),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("FSR_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };

    let outcome = match cli.command {
        Command::Calibrate {
            input,
            out,
            equalize,
        } => commands::calibrate(&input, &out, equalize).map(|store| {
            println!(
                "{} sensor curves written to {}",
                store.sensors.len(),
                out.display()
            );
            true
        }),
        Command::Simulate {
            spec,
            curves,
            out,
            truth,
            seed,
        } => commands::simulate(&spec, &curves, &out, &truth, seed).map(|t| {
            println!(
                "{} frames, {} truth events",
                t.frames.len(),
                t.truth.events.len()
            );
            true
        }),
        Command::Detect {
            trace,
            curves,
            base,
            out,
        } => commands::detect(&trace, &curves, base, &out).map(|run| {
            println!(
                "base {:.2} kg, {} events written to {}",
                run.base_weight_kg,
                run.events.len(),
                out.display()
            );
            true
        }),
        Command::Report {
            events,
            truth,
            tol_lift,
            tol_base,
        } => {
            let tolerances = Tolerances {
                lift_pct: tol_lift,
                base_pct: tol_base,
            };
            commands::report(&events, &truth, tolerances).map(|r| {
                print!("{}", commands::render_report(&r));
                r.pass
            })
        }
    };

    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
