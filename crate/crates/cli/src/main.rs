//! `compacta`: run compact-set and modulus computations from JSON problem files.

mod commands;
mod error;
mod expr;
mod problem;
mod resolve;

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use serde_path_to_error::Segment;

use crate::commands::Options;
use crate::error::{CliError, CliResult};
use crate::problem::Problem;

#[derive(Debug, Parser)]
#[command(name = "compacta", version, about = "Exact computations on compacts and extraction of continuity moduli")]
struct Args {
    /// Problem file (JSON); standard input when absent or "-".
    input: Option<PathBuf>,
    /// Decimal places when rendering reals.
    #[arg(long, default_value_t = 20)]
    precision: u32,
    /// Search budget; overrides `params.budget`.
    #[arg(long)]
    budget: Option<u32>,
    /// Sample N member pairs and count modulus violations.
    #[arg(long, value_name = "N")]
    check_soundness: Option<usize>,
    /// Seed for sampling; overrides `params.seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Include the extraction trace in the report.
    #[arg(long)]
    trace: bool,
    /// Print elapsed time to standard error.
    #[arg(long)]
    timing: bool,
}

fn read_input(path: Option<&PathBuf>) -> CliResult<String> {
    let mut s = String::new();
    match path {
        Some(p) if p.as_os_str() != "-" => s = std::fs::read_to_string(p)?,
        _ => {
            std::io::stdin().read_to_string(&mut s)?;
        }
    }
    Ok(s)
}

fn pointer_of(path: &serde_path_to_error::Path) -> String {
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => out.push_str(&format!("/{}", key.replace('~', "~0").replace('/', "~1"))),
            Segment::Enum { variant } => out.push_str(&format!("/{variant}")),
            Segment::Unknown => {}
        }
    }
    out
}

fn parse_problem(text: &str) -> CliResult<Problem> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| CliError::invalid(pointer_of(e.path()), e.inner().to_string()))
}

fn execute(args: &Args) -> CliResult<serde_json::Value> {
    let text = read_input(args.input.as_ref())?;
    let problem = parse_problem(&text)?;
    let opts = Options {
        precision: args.precision,
        budget: args.budget,
        check_soundness: args.check_soundness,
        seed: args.seed,
        trace: args.trace,
    };
    if args.budget == Some(0) {
        return Err(CliError::invalid("", "--budget must be at least 1"));
    }
    commands::run(&problem, &opts)
}

/// Writes the report to stdout; a closed pipe is not an error.
fn emit(v: &serde_json::Value) {
    let mut out = std::io::stdout().lock();
    let text = serde_json::to_string_pretty(v).expect("report serializes");
    let _ = writeln!(out, "{text}");
}

fn main() -> ExitCode {
    let args = Args::parse();
    let start = Instant::now();
    let outcome = execute(&args);
    if args.timing {
        eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    }
    match outcome {
        Ok(report) => {
            emit(&report);
            ExitCode::SUCCESS
        }
        Err(e) => {
            emit(&e.to_json());
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
