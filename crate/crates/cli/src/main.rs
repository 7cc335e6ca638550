//! `usvpath`: run path-following scenarios and write plot-ready CSV files.

mod commands;
mod plot;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "usvpath", version, about = "Path-following simulation for differential-thrust surface vehicles")]
struct Cli {
    /// More output (repeat for more detail).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    /// Only print errors.
    #[arg(short, long, global = true, conflicts_with = "verbose")]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one scenario; writes log.csv and metrics.csv.
    Run {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the same scenario under several guidance laws; writes log_<law>.csv and comparison.csv.
    Compare {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated guidance laws (los, alos, vfalos, vfilos, tlos).
        #[arg(long, value_delimiter = ',', default_value = "alos,tlos,vfilos,vfalos")]
        laws: Vec<String>,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Run the scenario once per value of one parameter; writes sweep.csv.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        /// Dotted config key, e.g. guidance.params.lookahead_delta.
        #[arg(long)]
        sweep_key: String,
        /// Comma-separated values for the key.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        sweep_values: Vec<String>,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Check Lyapunov decrease and exponential convergence on the reduced closed loop;
    /// writes stability.csv.
    VerifyStability {
        #[command(flatten)]
        common: CommonArgs,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Scenario JSON file; built-in defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, env = "USVPATH_OUT", default_value = "out")]
    out: PathBuf,
    /// Override a config value, e.g. --set guidance.law=alos (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Also write a gnuplot script next to the CSV files.
    #[arg(long)]
    emit_plot_script: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(commands::EXIT_CONFIG) } else { ExitCode::SUCCESS };
        }
    };
    let verbosity = if cli.quiet { 0 } else { 1 + cli.verbose };
    let result = match cli.command {
        Command::Run { common } => commands::run(&common, verbosity),
        Command::Compare { common, laws, jobs } => commands::compare(&common, &laws, jobs, verbosity),
        Command::Sweep {
            common,
            sweep_key,
            sweep_values,
            jobs,
        } => commands::sweep(&common, &sweep_key, &sweep_values, jobs, verbosity),
        Command::VerifyStability { common, jobs } => commands::verify_stability(&common, jobs, verbosity),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
