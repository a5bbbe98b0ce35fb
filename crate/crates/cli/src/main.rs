use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use jamnet::{parse_config, run_command, CliError, Command};

/// Equilibrium solvers, simulators and bounds for estimation over a
/// jammed Gaussian multiple access channel.
#[derive(Debug, Parser)]
#[command(name = "jamnet", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// JSON configuration document.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `output_path` in the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the Monte Carlo and probe seed.
    #[arg(long)]
    seed: Option<u64>,
}

fn run(args: &Args) -> Result<i32, CliError> {
    let text = std::fs::read_to_string(&args.config).map_err(|source| CliError::Io {
        path: args.config.clone(),
        source,
    })?;
    let cfg = parse_config(&text, args.command)?;
    let outcome = run_command(&cfg, args.out.as_deref(), args.seed)?;
    println!("{}", outcome.summary);
    Ok(outcome.exit_code)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("jamnet: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
