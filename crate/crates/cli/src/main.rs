//! `osfib`: experiments and numerical checks for stochastic bandits with
//! one-sided full-information feedback.

mod checks;
mod plot;
mod run;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use osfib_core::Error;

/// Exit status for a failed check or an I/O problem.
const EXIT_FAILURE: u8 = 1;
/// Exit status for bad flags, configs or parameters.
const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "osfib", version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run seeded replications of one policy on one instance and write
    /// per-run traces, a summary and metadata.
    Run(run::RunArgs),
    /// Evaluate a verification suite; exits 1 if any check fails.
    Verify(checks::VerifyArgs),
    /// Exact tail checks and prediction-game experiments.
    LowerBound(checks::LowerBoundArgs),
    /// Merge run summaries into one long-format CSV for plotting.
    PlotData(plot::PlotArgs),
}

/// Outcome of a subcommand that completed without an error.
enum Status {
    Ok,
    ChecksFailed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run::run(args),
        Command::Verify(args) => checks::verify(args),
        Command::LowerBound(args) => checks::lower_bound(args),
        Command::PlotData(args) => plot::plot_data(args),
    };
    match result {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::ChecksFailed) => ExitCode::from(EXIT_FAILURE),
        Err(e) => {
            eprintln!("osfib: {e}");
            ExitCode::from(if e.is_usage() {
                EXIT_USAGE
            } else {
                EXIT_FAILURE
            })
        }
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}
