use clap::{Args, Parser, Subcommand};
use deco_cli::config::{self, Resolved};
use deco_cli::validate::{run_validate, ValidateOptions};
use deco_cli::{commands, CliError};
use std::path::PathBuf;
use std::process::ExitCode;

/// Collisional-decoherence toolkit: thermally averaged scattering
/// cross-sections, decoherence rates, visibility curves, and spatial
/// decoherence functions, with built-in oracle cross-checks.
#[derive(Parser)]
#[command(name = "decoherence-kit", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// JSON run configuration
    #[arg(long)]
    config: PathBuf,
    /// CSV output path (overrides output_path from the config; stdout
    /// when neither is given)
    #[arg(long)]
    out: Option<PathBuf>,
    /// accepted for interface uniformity; only `validate` consumes it
    #[arg(long)]
    seed: Option<u64>,
    /// accepted for interface uniformity; only `validate` consumes it
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Args)]
struct ValidateArgs {
    /// write the report here as well as to stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// seed for the Monte-Carlo cross-check
    #[arg(long, default_value_t = ValidateOptions::default().seed)]
    seed: u64,
    /// sample count for the Monte-Carlo cross-check
    #[arg(long, default_value_t = ValidateOptions::default().samples)]
    samples: usize,
    /// debug: scale the closed-form prefactor by (1 + this) to prove
    /// the harness trips
    #[arg(long, default_value_t = 0.0)]
    perturb_k: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the thermally averaged cross-section over incoming speed
    Xsection(RunArgs),
    /// Scan interference visibility against background-gas pressure
    Visibility(RunArgs),
    /// Tabulate the spatial decoherence function F(delta_x)
    #[command(name = "decoherence-function")]
    DecoherenceFunction(RunArgs),
    /// Run the oracle cross-check suite
    Validate(ValidateArgs),
}

fn emit(args: &RunArgs, resolved: &Resolved, text: &str) -> Result<(), CliError> {
    let target = args.out.clone().or_else(|| resolved.output_path.clone());
    match target {
        Some(path) => std::fs::write(&path, text)
            .map_err(|e| CliError::Config(format!("cannot write output {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_csv_command(
    args: &RunArgs,
    build: impl Fn(&Resolved) -> Result<String, CliError>,
) -> Result<(), CliError> {
    let resolved = config::load(&args.config)?.resolve()?;
    let text = build(&resolved)?;
    emit(args, &resolved, &text)
}

fn run() -> Result<bool, CliError> {
    match Cli::parse().command {
        Command::Xsection(args) => {
            run_csv_command(&args, commands::cmd_xsection)?;
            Ok(true)
        }
        Command::Visibility(args) => {
            run_csv_command(&args, commands::cmd_visibility)?;
            Ok(true)
        }
        Command::DecoherenceFunction(args) => {
            run_csv_command(&args, commands::cmd_decoherence_function)?;
            Ok(true)
        }
        Command::Validate(args) => {
            let opts = ValidateOptions {
                seed: args.seed,
                samples: args.samples,
                perturb_k: args.perturb_k,
            };
            let (report, all_pass) = run_validate(&opts)?;
            print!("{report}");
            if let Some(path) = args.out {
                std::fs::write(&path, &report).map_err(|e| {
                    CliError::Config(format!("cannot write report {}: {e}", path.display()))
                })?;
            }
            Ok(all_pass)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
