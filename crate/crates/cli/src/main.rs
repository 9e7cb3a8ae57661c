//! `cellgreen` command-line front end.

mod cmd;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Seed used by randomized checks unless `--seed` is given.
pub const DEFAULT_SEED: u64 = 0x5EED_CE11;

#[derive(Parser, Debug)]
#[command(name = "cellgreen", version, about = "Green functions, property B and X_p samples of linear cellular automata")]
pub struct Cli {
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Directory that relative output paths are resolved against.
    #[arg(long, global = true, env = "CELLGREEN_OUT_DIR")]
    pub out_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct CaArgs {
    /// Automaton expression (e.g. `gamma`, `dual(theta)`) or path to a symbol file.
    #[arg(long)]
    pub ca: String,
    /// Field size; defaults to the symbol file's or 2.
    #[arg(long)]
    pub p: Option<u32>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pgm,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Space-time diagram from a single seed, as a binary PGM.
    Render {
        #[command(flatten)]
        ca: CaArgs,
        #[arg(long, default_value_t = 64)]
        rows: u64,
        #[arg(long)]
        mirror: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Green function rows as one JSON document per line.
    Green {
        #[command(flatten)]
        ca: CaArgs,
        #[arg(long, default_value_t = 1)]
        y: u64,
        /// Last row to print (inclusive); defaults to `--y`.
        #[arg(long)]
        to: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide B(x, y, l, r).
    Propb {
        #[command(flatten)]
        ca: CaArgs,
        #[arg(long, allow_hyphen_values = true)]
        x: i64,
        #[arg(long)]
        y: u64,
        #[arg(long, default_value_t = 0)]
        l: u64,
        #[arg(long, default_value_t = 0)]
        r: u64,
        /// Also realise every short word in the image.
        #[arg(long)]
        coverage: bool,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Window enumeration cap for non-linear automata.
        #[arg(long, default_value_t = cellgreen::green::DEFAULT_ORACLE_BUDGET)]
        budget: u128,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Finite-scale sample of X_p.
    Xp {
        #[command(flatten)]
        ca: CaArgs,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = cellgreen::xp::DEFAULT_K)]
        k: u32,
        #[arg(long)]
        y_max: Option<u64>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        mirror: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Substitution systems.
    Subst {
        #[command(subcommand)]
        op: SubstOp,
    },
    /// Replay the slope-matching obstruction between two automata.
    Obstruct {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        /// Sampling depth.
        #[arg(long, default_value_t = 9)]
        n: u32,
        #[arg(long, default_value_t = cellgreen::xp::DEFAULT_K)]
        k: u32,
        /// Containment tolerance in cells.
        #[arg(long, default_value_t = 2)]
        tol: i64,
        /// Also search for a containing map over small rationals.
        #[arg(long)]
        search: bool,
        #[arg(long, default_value_t = 8)]
        denom_bound: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct SystemArgs {
    /// Builtin table name or path to a table file.
    #[arg(long, default_value = "gamma")]
    pub system: String,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    I,
    Ii,
    Iii,
    All,
}

#[derive(Subcommand, Debug)]
pub enum SubstOp {
    /// Print the expanded grid, top row first.
    Expand {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long)]
        depth: u32,
        #[arg(long, allow_hyphen_values = true)]
        x_lo: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        x_hi: Option<i64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// State of one cell.
    Cell {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long, allow_hyphen_values = true)]
        x: i64,
        #[arg(long)]
        y: u64,
        #[arg(long)]
        depth: u32,
    },
    /// Compare the projected grid with the automaton's Green rows.
    Verify {
        #[command(flatten)]
        sys: SystemArgs,
        /// Automaton; defaults to the builtin table's own.
        #[arg(long)]
        ca: Option<String>,
        #[arg(long, default_value_t = 6)]
        depth: u32,
    },
    /// Reachable states and strongly connected components.
    Scc {
        #[command(flatten)]
        sys: SystemArgs,
    },
    /// Check the structural assertions. Without `--system`, i and ii run on
    /// `gamma` and iii on `omega`.
    Assert {
        #[arg(long)]
        system: Option<String>,
        #[arg(long, value_enum, default_value_t = Which::All)]
        which: Which,
        #[arg(long, default_value_t = 10)]
        n: u32,
    },
}

/// Result of a check-style command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    True,
    False,
}

fn exit_code(e: &cellgreen::Error) -> u8 {
    use cellgreen::Error::*;
    match e {
        Budget { .. } => 3,
        Precondition(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cmd::dispatch(&cli) {
        Ok(Outcome::True) => ExitCode::SUCCESS,
        Ok(Outcome::False) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
