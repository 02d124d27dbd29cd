//! `geomc` — experiment driver for the geodesic Monte Carlo library.
//!
//! Exit codes: 0 on success, 1 on runtime/numeric errors, 2 on usage or
//! configuration errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use geomc::error::Error;
use geomc::experiments::run_experiment;
use geomc::io::config::{apply_overrides, config_to_json, load_config, preset, PRESET_NAMES};

#[derive(Parser)]
#[command(name = "geomc", version, about = "Geodesic Monte Carlo experiment driver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a JSON config file.
    Run { config: PathBuf },
    /// Run a built-in preset, optionally patching it first.
    Preset {
        /// One of the built-in presets.
        name: String,
        /// Dotted-path patch, e.g. --override kernel.epsilon=0.02 (repeatable).
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        /// Print the resolved config as JSON instead of running it.
        #[arg(long)]
        print: bool,
    },
    /// Check a config file and echo its resolved form.
    Validate { config: PathBuf },
}

const USAGE_EXIT: u8 = 2;
const RUNTIME_EXIT: u8 = 1;

fn usage_error(e: Error) -> (Error, u8) {
    (e, USAGE_EXIT)
}

fn runtime_error(e: Error) -> (Error, u8) {
    let code = match &e {
        Error::Config(_) | Error::Parse { .. } => USAGE_EXIT,
        _ => RUNTIME_EXIT,
    };
    (e, code)
}

fn execute(command: Command) -> Result<(), (Error, u8)> {
    match command {
        Command::Run { config } => {
            let cfg = load_config(&config).map_err(usage_error)?;
            let summary = run_experiment(&cfg).map_err(runtime_error)?;
            report(&summary);
            Ok(())
        }
        Command::Preset {
            name,
            overrides,
            print,
        } => {
            let base = preset(&name).map_err(usage_error)?;
            let cfg = if overrides.is_empty() {
                base
            } else {
                apply_overrides(&base, &overrides).map_err(usage_error)?
            };
            if print {
                println!("{}", config_to_json(&cfg));
                return Ok(());
            }
            let summary = run_experiment(&cfg).map_err(runtime_error)?;
            report(&summary);
            Ok(())
        }
        Command::Validate { config } => {
            let cfg = load_config(&config).map_err(usage_error)?;
            let resolved = cfg.resolve().map_err(usage_error)?;
            println!("{}", config_to_json(&resolved));
            eprintln!("config OK");
            Ok(())
        }
    }
}

fn report(summary: &geomc::experiments::ExperimentSummary) {
    for run in &summary.runs {
        let ess = run
            .ess_post_burn_in
            .as_ref()
            .map(|r| format!("ESS% {:.2}", r.ess_percent))
            .unwrap_or_else(|| "ESS undefined".into());
        let acc = run
            .ess_raw
            .as_ref()
            .map(|r| format!("accept {:.2}", r.acceptance_rate))
            .unwrap_or_default();
        eprintln!(
            "{}: {} {} ({:.2}s) -> {}",
            run.label, ess, acc, run.wall_seconds, run.trace_file
        );
    }
    eprintln!(
        "wrote {} (total {:.2}s)",
        summary.config.output.join("summary.json").display(),
        summary.wall_seconds_total
    );
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err((e, code)) => {
            eprintln!("error: {e}");
            if code == USAGE_EXIT {
                eprintln!("(usage/config error; presets: {})", PRESET_NAMES.join(", "));
            }
            ExitCode::from(code)
        }
    }
}
