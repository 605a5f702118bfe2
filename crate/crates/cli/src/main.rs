//! `qutrit-ecc`: command-line front end for the nine-qutrit code simulator.
//!
//! Exit codes: 0 on success, 1 when `verify` finds a failing check, 2 on
//! invalid input.

mod commands;
mod config;

use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use commands::UsageError;
use config::{CommandKind, ErrorSpec, MatrixSource, MenuArg, ModeArg, OutputFormat, RunConfig};

#[derive(Parser)]
#[command(name = "qutrit-ecc", version, about = "Nine-qutrit error-correcting code simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SeedArg {
    /// Seed for logical inputs and measurement outcomes.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Check gate identities, the stabilizer and comparison tables, swap
    /// expansions and the qutrit-count bound.
    Verify,
    /// Encode a random logical state, inject one error, correct and decode.
    Demo {
        /// Error name (X01, X12, X20, X1, X2, Z1, Z2, Z12, R1, R2, iZ1X01, ..., Rtheta) or `none`.
        #[arg(long, default_value = "none")]
        error: String,
        /// Qutrit receiving the error (0..=8).
        #[arg(long, default_value_t = 0)]
        pos: usize,
        #[arg(long, allow_negative_numbers = true)]
        theta: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        phi: Option<f64>,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Estimate the logical failure rate at one or more physical error rates.
    Montecarlo {
        /// Physical error probabilities (repeat or comma-separate).
        #[arg(long, required = true, num_args = 1.., value_delimiter = ',')]
        p: Vec<f64>,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Discrete)]
        mode: ModeArg,
        /// Operator menu for discrete mode.
        #[arg(long, value_enum, default_value_t = MenuArg::Standard)]
        menu: MenuArg,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        output: OutputFormat,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Expand a 3×3 operator over the nine X^u R^v terms.
    Decompose {
        /// Gate name; omit when passing --entries.
        gate: Option<String>,
        /// Nine complex entries, row-major, as 18 numbers `re im re im ...`.
        #[arg(long, num_args = 18, allow_negative_numbers = true, conflicts_with = "gate")]
        entries: Option<Vec<f64>>,
        #[arg(long, allow_negative_numbers = true)]
        theta: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        phi: Option<f64>,
    },
    /// Run the two-qutrit comparison circuit on all nine basis inputs.
    TruthTable,
    /// Compare a three-qutrit basis block using explicit ancillas.
    CompareBlock {
        /// Three base-3 digits, e.g. 201.
        #[arg(long, default_value = "000")]
        digits: String,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Detect and undo a phase flip with the two-level Hadamards.
    PhaseDemo {
        #[arg(long, default_value = "Z12")]
        error: String,
        #[arg(long, allow_negative_numbers = true)]
        theta: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        phi: Option<f64>,
    },
    /// Print the qutrit-count bound table for n = 1..=9.
    Bound,
    /// Re-run the configuration embedded in a JSON report (`-` for stdin).
    Replay { report: String },
}

fn angles_spec(name: &str, position: usize, theta: Option<f64>, phi: Option<f64>) -> ErrorSpec {
    ErrorSpec { name: name.to_string(), position, theta, phi }
}

fn to_config(command: Command) -> Result<RunConfig, UsageError> {
    let config = match command {
        Command::Verify => RunConfig::new(CommandKind::Verify, 0),
        Command::Demo { error, pos, theta, phi, seed } => RunConfig {
            error_spec: Some(angles_spec(&error, pos, theta, phi)),
            ..RunConfig::new(CommandKind::Demo, seed.seed)
        },
        Command::Montecarlo { p, trials, mode, menu, output, seed } => RunConfig {
            p,
            trials: Some(trials),
            mode,
            menu,
            output_format: output,
            ..RunConfig::new(CommandKind::Montecarlo, seed.seed)
        },
        Command::Decompose { gate, entries, theta, phi } => {
            let matrix = match (gate, entries) {
                (Some(g), None) => MatrixSource::Gate(g),
                (None, Some(e)) => MatrixSource::Entries(e.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect()),
                _ => return Err(UsageError("decompose needs a gate name or --entries".into())),
            };
            let error_spec = (theta.is_some() || phi.is_some()).then(|| angles_spec("Rtheta", 0, theta, phi));
            RunConfig { matrix: Some(matrix), error_spec, ..RunConfig::new(CommandKind::Decompose, 0) }
        }
        Command::TruthTable => RunConfig::new(CommandKind::TruthTable, 0),
        Command::CompareBlock { digits, seed } => {
            RunConfig { digits: Some(digits), ..RunConfig::new(CommandKind::CompareBlock, seed.seed) }
        }
        Command::PhaseDemo { error, theta, phi } => RunConfig {
            error_spec: Some(angles_spec(&error, 0, theta, phi)),
            ..RunConfig::new(CommandKind::PhaseDemo, 0)
        },
        Command::Bound => RunConfig::new(CommandKind::Bound, 0),
        Command::Replay { report } => {
            let text = if report == "-" {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s)?;
                s
            } else {
                std::fs::read_to_string(&report)?
            };
            let value: serde_json::Value = serde_json::from_str(&text)?;
            let config = value.get("config").ok_or_else(|| UsageError("report has no config".into()))?;
            serde_json::from_value(config.clone())?
        }
    };
    Ok(config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = to_config(cli.command).and_then(|config| commands::run(&config));
    match result {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.text.as_bytes()).and_then(|()| stdout.flush()).is_err() {
                return ExitCode::from(2);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
