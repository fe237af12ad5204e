//! `vandiver`: batch driver for exponent sets, the two criteria, density
//! scans, ranks, trace polynomials and residue symbols.

mod commands;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use vandiver_core::error::Error;

/// Exit status for a criterion that was not established within the bounds.
pub const EXIT_UNDETERMINED: u8 = 3;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_IO: u8 = 4;
pub const EXIT_FAILURE: u8 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "vandiver",
    version,
    about = "Jacobi-sum criteria for Vandiver's conjecture"
)]
pub struct Cli {
    #[command(flatten)]
    pub run: RunArgs,

    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by every subcommand. A flag beats its environment
/// variable, which beats the default.
#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// Workers for the mod-p computations [default: all cores]
    #[arg(long, global = true, env = "VANDIVER_JOBS")]
    pub jobs: Option<usize>,

    /// Workers for exact big-integer computations (symbol)
    #[arg(long, global = true, env = "VANDIVER_EXACT_JOBS", default_value_t = 1)]
    pub exact_jobs: usize,

    /// Directory for the JSON-lines caches
    #[arg(long, global = true, env = "VANDIVER_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,

    #[arg(long, global = true, env = "VANDIVER_FORMAT", value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Reuse results already in the cache instead of recomputing them
    #[arg(long, global = true)]
    pub resume: bool,

    /// Byte cap for one exact component
    #[arg(long, global = true, env = "VANDIVER_MEMORY_CAP", default_value_t = 1 << 30)]
    pub memory_cap: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Which primes `p` and which split primes `ell` to work on.
#[derive(Args, Debug, Clone)]
pub struct Select {
    /// Odd prime p (first of a range with --p-max)
    #[arg(long)]
    pub p: u32,

    /// Last p of the range
    #[arg(long)]
    pub p_max: Option<u32>,

    /// A single split prime ell
    #[arg(long, conflicts_with_all = ["l_max", "count"])]
    pub l: Option<u64>,

    /// Upper bound on ell
    #[arg(long)]
    pub l_max: Option<u64>,

    /// Number of split primes (or max N for criterion b)
    #[arg(long)]
    pub count: Option<usize>,

    /// Twist parameter c, a primitive root mod p [default: the smallest]
    #[arg(long)]
    pub c: Option<u32>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriterionMode {
    /// E_l(p) and E_0(p) are disjoint for one l
    A,
    /// the running intersection of E_l(p) empties
    B,
    /// first l with E_l(p) empty
    Min,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exponent sets of p-primarity
    Expp(#[command(flatten)] Select),

    /// Criterion (a), (b) or the minimal-l search; exit 3 when not established
    Vandiver {
        #[command(flatten)]
        select: Select,
        #[arg(long, value_enum, default_value_t = CriterionMode::B)]
        mode: CriterionMode,
    },

    /// Primarity counts per exponent over the first --count split primes
    Scan(#[command(flatten)] Select),

    /// First l at which the coefficient rows of J(l) reach rank p-4
    Rank {
        #[command(flatten)]
        select: Select,
        /// Rank of the p-1 conjugates of J(l) for the given --l instead
        #[arg(long)]
        conjugates: bool,
    },

    /// Trace polynomials R_l of the Gaussian periods
    Trace {
        #[command(flatten)]
        select: Select,
        /// Print each new polynomial and the number of distinct ones
        #[arg(long)]
        distinct: bool,
    },

    /// p-th power residue symbol of the exact component Sn
    Symbol {
        #[command(flatten)]
        select: Select,
        /// Even exponent n in [2, p-3]
        #[arg(long)]
        n: u32,
    },

    /// Exponents of p-irregularity
    Bernoulli(#[command(flatten)] Select),
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) | Error::Json(_) => EXIT_IO,
        Error::Internal(_) | Error::MemoryCap { .. } => EXIT_FAILURE,
        _ => EXIT_INVALID,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = commands::run(&cli, &mut out);
    let flushed = out.flush();
    match (result, flushed) {
        (Ok(code), Ok(())) => ExitCode::from(code),
        (Err(e), _) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        (Ok(_), Err(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        (Ok(_), Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_IO)
        }
    }
}
