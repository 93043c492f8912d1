//! `rhofix` — batch front-end for modular-space fixed-point runs.
//!
//! Subcommands: `certify` (hypothesis certification), `solve` (one solver
//! run with result + trace files), `sweep` (one solve per parameter
//! value), `report` (trace summary). Exit codes: 0 success, 1 mathematical
//! failure (non-convergence or certification rejection), 2 usage or
//! configuration error.

mod commands;
mod common;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "rhofix", version, about = "Fixed points on discretized modular spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Run configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Override the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (default: config `out_dir`, then $RHOFIX_OUT, then `.`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the config tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Override the config iteration budget.
    #[arg(long)]
    max_iter: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Certify the requested hypotheses and write a report file.
    Certify(RunArgs),
    /// Run the configured solver; write a result document and a trace.
    Solve(RunArgs),
    /// Run one solve per value of a swept parameter.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// Parameter to sweep: k | c | l | beta | schedule_length | grid_size.
        #[arg(long)]
        param: String,
        /// Comma-separated values.
        #[arg(long)]
        values: String,
    },
    /// Summarize one or more trace files.
    Report {
        /// Trace files to summarize.
        #[arg(required = true)]
        traces: Vec<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Certify(args) => commands::certify(&args.into()),
        Command::Solve(args) => commands::solve(&args.into()),
        Command::Sweep { run, param, values } => {
            commands::sweep(&run.into(), &param, &values)
        }
        Command::Report { traces } => commands::report(&traces),
    };
    match outcome {
        Ok(code) => code,
        Err(common::CliError::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(common::CliError::Math(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

impl From<RunArgs> for common::RunOverrides {
    fn from(args: RunArgs) -> Self {
        common::RunOverrides {
            config_path: args.config,
            seed: args.seed,
            out: args.out,
            tol: args.tol,
            max_iter: args.max_iter,
        }
    }
}
