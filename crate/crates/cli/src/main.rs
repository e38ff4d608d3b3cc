//! `sepineq`: entanglement detection for 2 x d density matrices.
//!
//! Verdicts never change the exit code. Exit status is 0 on success and 2 on
//! I/O, parse or validation errors.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;

use commands::{DetectMethod, PairArg, ScanArgs};
use sepineq::catalog::Family;
use sepineq::io::ScanFamily;

#[derive(Parser)]
#[command(name = "sepineq", version, about = "Bell-type separability inequalities for 2 x d states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn kebab<T: DeserializeOwned>(s: &str) -> Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|_| format!("unknown value `{s}`"))
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the inequality and/or the reference criteria on a state file.
    Detect {
        state: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        method: DetectMethod,
        /// Pair file, `npt-seed`, `isotropic` or `sigma-b`.
        #[arg(long, default_value = "npt-seed")]
        pair: PairArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Grid scan over a one-parameter family, written as CSV.
    Scan {
        /// `isotropic23` or `sigma-b`.
        #[arg(long, value_parser = kebab::<ScanFamily>)]
        family: ScanFamily,
        /// `start:stop:step`, inclusive.
        #[arg(long)]
        range: String,
        /// Also scan `t` in `U = cos t I + sin t (|0><1| - |1><0|)`, `V = I`.
        #[arg(long)]
        rotation: Option<String>,
        /// Defaults to the family's reference pair.
        #[arg(long)]
        pair: Option<PairArg>,
        /// Add the optimized column `f_opt`.
        #[arg(long)]
        optimize: bool,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, env = "SEPINEQ_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Simulate finite-shot measurements of the three local settings.
    Measure {
        state: PathBuf,
        #[arg(long, default_value = "npt-seed")]
        pair: PairArg,
        /// Shots per setting.
        #[arg(long)]
        shots: u64,
        #[arg(long, env = "SEPINEQ_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Maximize the violation over all unitary pairs.
    Optimize {
        state: PathBuf,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        #[arg(long, env = "SEPINEQ_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a catalog state as a state file.
    State {
        #[arg(long, value_parser = kebab::<Family>)]
        family: Family,
        /// `key=value`, repeated.
        #[arg(long = "param", value_parser = commands::parse_param)]
        params: Vec<(String, f64)>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let (text, out) = match cli.command {
        Command::Detect { state, method, pair, out } => (commands::cmd_detect(&state, method, &pair)?, out),
        Command::Scan { family, range, rotation, pair, optimize, restarts, out, seed } => {
            let args = ScanArgs { family, range, rotation, pair, optimize, restarts, seed };
            (commands::cmd_scan(&args)?, out)
        }
        Command::Measure { state, pair, shots, seed, out } => (commands::cmd_measure(&state, &pair, shots, seed)?, out),
        Command::Optimize { state, restarts, seed, out } => (commands::cmd_optimize(&state, restarts, seed)?, out),
        Command::State { family, params, seed, out } => (commands::cmd_state(family, &params, seed)?, out),
    };
    match out {
        Some(path) => commands::write_atomic(&path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
