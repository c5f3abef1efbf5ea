//! `gegenchain`: tables, curves, matrices and spectra of the Gegenbauer chain
//! as JSON or CSV.
//!
//! Exit codes: 0 success, 2 usage error, 3 numerical failure.

mod commands;
mod error;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::Object;
use error::CliError;
use output::{Envelope, Format};

#[derive(Parser)]
#[command(name = "gegenchain", version, about)]
struct Cli {
    /// Gegenbauer parameter, a > 0
    #[arg(
        long,
        global = true,
        default_value_t = 1.0,
        allow_negative_numbers = true
    )]
    a: f64,
    /// Number of levels N (for table1, the largest N)
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Absolute bisection tolerance on g
    #[arg(long, global = true, default_value_t = gegenchain::positivity::DEFAULT_BISECTION_TOL)]
    tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for table1 (default: logical CPUs)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Output file (default: stdout)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Positivity boundaries G, G', G'' for N = 1..n
    Table1,
    /// Eigenvalues of Θ0 + g·P1 on a grid of g
    Fig1 {
        #[arg(long, default_value_t = 241)]
        samples: usize,
        #[arg(long, default_value_t = -1.2, allow_negative_numbers = true)]
        g_min: f64,
        #[arg(long, default_value_t = 1.2, allow_negative_numbers = true)]
        g_max: f64,
    },
    /// A matrix or spectrum
    Dump {
        #[arg(value_enum)]
        object: Object,
        /// Band of the generic solution (object `banded`)
        #[arg(long)]
        k: Option<usize>,
    },
    /// Dieudonné residual of a metric written by `dump` (JSON)
    Residual {
        /// Input file; stdin when absent
        input: Option<PathBuf>,
    },
    /// Single positivity boundary
    Boundary {
        #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=2))]
        max_negatives: u8,
    },
}

fn run(cli: &Cli) -> Result<Envelope, CliError> {
    if !(cli.tol > 0.0) {
        return Err(CliError::Usage(format!(
            "--tol must be positive, got {}",
            cli.tol
        )));
    }
    if cli.jobs == Some(0) {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    match &cli.command {
        Command::Table1 => commands::table1(cli.n.unwrap_or(9), cli.a, cli.tol, cli.jobs),
        Command::Fig1 {
            samples,
            g_min,
            g_max,
        } => commands::fig1(cli.n.unwrap_or(3), cli.a, *samples, *g_min, *g_max),
        Command::Dump { object, k } => commands::dump(*object, cli.n.unwrap_or(4), cli.a, *k),
        Command::Residual { input } => match input {
            Some(path) => commands::residual_of(&mut File::open(path)?),
            None => commands::residual_of(&mut io::stdin().lock()),
        },
        Command::Boundary { max_negatives } => {
            commands::boundary_cmd(cli.n.unwrap_or(4), cli.a, *max_negatives as usize, cli.tol)
        }
    }
}

fn emit(cli: &Cli, envelope: &Envelope) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            envelope.write(cli.format, &mut w)?;
            w.flush()?;
        }
        None => {
            let mut w = io::stdout().lock();
            envelope.write(cli.format, &mut w)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|env| emit(&cli, &env)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
