use std::io::{Read, Write};
use std::process::ExitCode;

use blochiso_cli::commands::{self, Options, VerifyMode};
use blochiso_cli::document::{parse_object, Kind, Object};
use blochiso_cli::render::{render, Format};
use blochiso_cli::CliError;
use clap::{Parser, Subcommand};
use serde_json::Value;

/// Qubit states, rotations and channels.
#[derive(Parser)]
#[command(name = "blochiso", version)]
struct Cli {
    /// Absolute tolerance for validation and checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Number of random cases for `verify` when no documents are given.
    #[arg(long, global = true, default_value_t = 1000)]
    samples: usize,
    /// Seed for random cases.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Converts a document to another kind.
    Convert {
        #[arg(long, value_enum)]
        to: Kind,
        /// Input file, or `-` for stdin.
        #[arg(default_value = "-")]
        input: String,
    },
    /// Classifies a Kraus channel and inverts it when possible.
    Classify {
        #[arg(default_value = "-")]
        input: String,
    },
    /// Runs a verification over documents, or over seeded random cases.
    Verify {
        #[arg(value_enum)]
        mode: VerifyMode,
        inputs: Vec<String>,
    },
    /// Affine action of a channel on Bloch vectors.
    BlochAction {
        #[arg(default_value = "-")]
        input: String,
    },
}

fn read_input(path: &str) -> Result<String, CliError> {
    let io = |source| CliError::Io {
        path: path.to_string(),
        source,
    };
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io)
    }
}

fn load(path: &str, opts: &Options) -> Result<Object, CliError> {
    parse_object(&read_input(path)?, opts.tol)
}

fn run(cli: Cli) -> Result<(Value, u8), CliError> {
    let opts = Options {
        tol: cli.tol,
        samples: cli.samples,
        seed: cli.seed,
    };
    if !(opts.tol.is_finite() && opts.tol >= 0.0) {
        return Err(CliError::Malformed(format!(
            "--tol must be a nonnegative number, got {}",
            opts.tol
        )));
    }
    Ok(match cli.command {
        Command::Convert { to, input } => {
            let out = commands::convert(load(&input, &opts)?, to, &opts)?;
            (serde_json::to_value(out.to_document()).expect("serializable"), 0)
        }
        Command::Classify { input } => (commands::classify(load(&input, &opts)?, &opts)?, 0),
        Command::Verify { mode, inputs } => {
            let objects = inputs.iter().map(|p| load(p, &opts)).collect::<Result<Vec<_>, _>>()?;
            let verdict = commands::verify(mode, objects, &opts)?;
            (verdict.report, if verdict.passed { 0 } else { 1 })
        }
        Command::BlochAction { input } => (commands::bloch_action(load(&input, &opts)?, &opts)?, 0),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    let (value, code) = match run(cli) {
        Ok(ok) => ok,
        Err(e) => (e.to_json(), e.exit_code()),
    };
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(render(&value, format).as_bytes()).is_err() {
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
