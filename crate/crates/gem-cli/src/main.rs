//! `gem`: run gradient echo memory scenarios from the command line.
//!
//! Exit codes: 0 success, 1 configuration error, 2 numerical failure,
//! 3 validity warning under `--strict`.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "gem", version, about = "Gradient echo memory simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Bundled preset to start from.
    #[arg(long, global = true)]
    scenario: Option<String>,
    /// Config file applied on top of the preset.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override one key (repeatable), e.g. `--set medium.optical_depth=1`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    sets: Vec<String>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Comma-separated extra outputs: boundary, field_zt, alpha_zt, spectra, config.
    /// An empty list writes only report.csv.
    #[arg(long, global = true, value_name = "LIST")]
    emit: Option<String>,
    /// Treat validity warnings as errors (exit code 3).
    #[arg(long, global = true)]
    strict: bool,
    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one scenario and write its report and traces.
    Simulate,
    /// Compare the solver with the closed-form solution.
    Compare,
    /// Run a scenario for every value of one key.
    Sweep {
        /// `key=v1,v2,...`
        #[arg(long)]
        axis: String,
    },
    /// Run two memories in series.
    Cascade,
}

pub enum Failure {
    Config(String),
    Numerical(String),
}

impl From<gem_core::GemError> for Failure {
    fn from(e: gem_core::GemError) -> Self {
        if e.is_config_error() {
            Failure::Config(e.to_string())
        } else {
            Failure::Numerical(e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Numerical(format!("i/o error: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.common.threads {
        if n == 0 {
            eprintln!("error: --threads must be >= 1");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match &cli.command {
        Command::Simulate => commands::simulate(&cli.common),
        Command::Compare => commands::compare(&cli.common),
        Command::Sweep { axis } => commands::sweep(&cli.common, axis),
        Command::Cascade => commands::cascade(&cli.common),
    };
    match result {
        Ok(warnings) => {
            for w in &warnings {
                eprintln!("warning: {w}");
            }
            if cli.common.strict && !warnings.is_empty() {
                return ExitCode::from(3);
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Config(m)) => {
            eprintln!("config error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
