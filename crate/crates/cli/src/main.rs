use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use bergman_cli::commands::{run, Command};
use bergman_cli::config::RunConfig;
use bergman_cli::CliError;

/// Spectra, ideal membership and quadrature checks for Bergman-type
/// operators on the unit ball.
#[derive(Debug, Parser)]
#[command(name = "bergman-spectra", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    config: RunConfig,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

const THREADS_VAR: &str = "BERGMAN_SPECTRA_THREADS";

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_VAR} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn execute(cli: &Cli) -> Result<Option<bool>, CliError> {
    configure_threads()?;
    cli.config.validate()?;
    let report = run(&cli.command, &cli.config)?;
    let text = report.render(cli.config.format);
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(Some(false)) => ExitCode::from(1),
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
