//! Command-line front end: covert backscatter link planning for
//! pinching-antenna deployments.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pabsc::commands;

#[derive(Parser)]
#[command(
    name = "pabsc",
    version,
    about = "Covert backscatter link analysis for pinching-antenna systems",
    after_help = "Exit codes: 0 success, 1 infeasible, 2 config error, 3 oracle failure, 4 I/O error."
)]
struct Cli {
    /// Scenario config file; indoor defaults apply when omitted.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Output file (solve, detect) or directory (sweep).
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Monte-Carlo seed override.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Suppress informational output.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Maximize the covert rate over transmit power and TPA position.
    Solve,
    /// Evaluate a parameter sweep: CSV plus SVG per figure.
    Sweep {
        /// Sweep specification file.
        sweep_file: PathBuf,
    },
    /// Check every closed form against brute-force and Monte-Carlo oracles.
    Verify,
    /// Tabulate detection-error probabilities versus the threshold.
    Detect {
        /// Number of table rows.
        #[arg(long, default_value_t = 201)]
        points: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve => {
            commands::cmd_solve(cli.config.as_deref(), cli.out.as_deref(), cli.quiet)
        }
        Command::Sweep { sweep_file } => {
            let out_dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("out"));
            commands::cmd_sweep(cli.config.as_deref(), sweep_file, &out_dir, cli.quiet).map(|_| ())
        }
        Command::Verify => commands::cmd_verify(cli.config.as_deref(), cli.seed, cli.quiet),
        Command::Detect { points } => {
            commands::cmd_detect(cli.config.as_deref(), cli.out.as_deref(), *points, cli.quiet)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("pabsc: {}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
