//! Scenario runner CLI.
//!
//! Exit codes: 0 success, 2 scenario validation failure, 3 runtime failure
//! (e.g. an impossible post-selection).

use clap::{Args, Parser, Subcommand, ValueEnum};
use enthist::scenario::{emit_csv, emit_json, parse_scenario, run_scenario, Scenario};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "enthist", version, about = "Entangled-histories scenario runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and emit a report.
    Run(RunArgs),
    /// Validate a scenario file without running it.
    Check {
        /// Scenario file (TOML).
        scenario: PathBuf,
    },
    /// Run a sweep scenario with the grid resolution overridden.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file (TOML).
    scenario: PathBuf,
    /// Override the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the shot count.
    #[arg(long)]
    shots: Option<u64>,
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Grid resolution: points for two_slit, steps per axis for
    /// multicopy_sweep.
    #[arg(long)]
    grid: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

const EXIT_VALIDATION: u8 = 2;
const EXIT_RUNTIME: u8 = 3;

fn fail(code: u8, message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(code)
}

fn load(path: &PathBuf) -> Result<Scenario, ExitCode> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| fail(EXIT_VALIDATION, format!("{}: {e}", path.display())))?;
    parse_scenario(&text).map_err(|e| fail(EXIT_VALIDATION, e))
}

fn execute(args: &RunArgs, mut scenario: Scenario) -> ExitCode {
    if let Some(seed) = args.seed {
        scenario.seed = seed;
    }
    if let Some(shots) = args.shots {
        if shots > 0 && !scenario.kind.supports_sampling() {
            return fail(
                EXIT_VALIDATION,
                format!("kind = {:?} does not support shot sampling", scenario.kind.name()),
            );
        }
        scenario.shots = shots;
    }
    let report = match run_scenario(&scenario) {
        Ok(r) => r,
        Err(e) => return fail(EXIT_RUNTIME, e),
    };
    let rendered = match args.format {
        Format::Csv => emit_csv(&report),
        Format::Json => emit_json(&report),
    };
    let rendered = match rendered {
        Ok(r) => r,
        Err(e) => return fail(EXIT_RUNTIME, e),
    };
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, rendered) {
                return fail(EXIT_RUNTIME, format!("{}: {e}", path.display()));
            }
        }
        None => print!("{rendered}"),
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run(args) => match load(&args.scenario) {
            Ok(scenario) => execute(&args, scenario),
            Err(code) => code,
        },
        Command::Check { scenario } => match load(&scenario) {
            Ok(s) => {
                println!("ok: {} scenario", s.kind.name());
                ExitCode::SUCCESS
            }
            Err(code) => code,
        },
        Command::Sweep(args) => match load(&args.run.scenario) {
            Ok(mut scenario) => {
                use enthist::scenario::ScenarioKind;
                if let Some(n) = args.grid {
                    if n == 0 {
                        return fail(EXIT_VALIDATION, "grid must be positive");
                    }
                    match &mut scenario.kind {
                        ScenarioKind::TwoSlit { screen } => {
                            match enthist::two_slit::ScreenModel::uniform_phase_grid(
                                n,
                                0.0,
                                2.0 * std::f64::consts::PI,
                            ) {
                                Ok(s) => *screen = s,
                                Err(e) => return fail(EXIT_VALIDATION, e),
                            }
                        }
                        ScenarioKind::MulticopySweep {
                            theta_steps,
                            phi_steps,
                        } => {
                            *theta_steps = n;
                            *phi_steps = n;
                        }
                        _ => {
                            return fail(
                                EXIT_VALIDATION,
                                "sweep --grid applies only to two_slit and multicopy_sweep",
                            )
                        }
                    }
                }
                execute(&args.run, scenario)
            }
            Err(code) => code,
        },
    }
}
