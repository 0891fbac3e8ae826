mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::{CliError, EXIT_SCHEMA};

/// Exact computations on semiabelian varieties: realizability of
/// homomorphism pairs, Chow intersection numbers, heights, Chern-form checks
/// and bounded-height scans.
///
/// Exit codes: 0 success, 2 malformed input, 3 invariant violation, 4 I/O,
/// 10 linalg, 11 semiabelian, 12 chow, 13 heights, 14 chern, 15 bhc.
/// SAK_THREADS caps the worker threads.
#[derive(Parser, Debug)]
#[command(name = "sak", version)]
pub struct Cli {
    /// Write the JSON result to this file instead of stdout
    #[arg(long, global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,
    /// Seed for randomized sampling
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Find an extension class making a homomorphism pair realizable
    Realize(RealizeArgs),
    /// Check whether a pair is a homomorphism between two descriptors
    HomCheck(HomCheckArgs),
    /// Intersection degree of the toric graph closure
    Chow(ChowArgs),
    /// beta_i or gamma_i intersection number of a pair
    BetaGamma(BetaGammaArgs),
    /// alpha constant and Siu inequality from two intersection numbers
    Alpha(AlphaArgs),
    /// Canonical heights of a point
    Height(InputArgs),
    /// Height-cone membership test
    Cone(InputArgs),
    /// Grid of points covering a box
    Cover(InputArgs),
    /// Chern-form matrix and kernel rank at a point
    Form(FormArgs),
    /// Integral of a mixed top power of Chern forms
    Quadrature(QuadratureArgs),
    /// Intersections of a rational curve with subgroups x^a = 1
    Bhc(BhcArgs),
}

#[derive(Args, Debug)]
pub struct RealizeArgs {
    /// Descriptor of the source variety (JSON)
    #[arg(long, value_name = "FILE")]
    pub model: PathBuf,
    /// Homomorphism pair (JSON)
    #[arg(long, value_name = "FILE")]
    pub pair: PathBuf,
    /// Target torus dimension; defaults to the number of rows of phi_tor
    #[arg(long)]
    pub t_prime: Option<usize>,
}

#[derive(Args, Debug)]
pub struct HomCheckArgs {
    /// Descriptor of the source variety (JSON)
    #[arg(long, value_name = "FILE")]
    pub model: PathBuf,
    /// Descriptor of the target variety (JSON)
    #[arg(long, value_name = "FILE")]
    pub target: PathBuf,
    /// Homomorphism pair (JSON)
    #[arg(long, value_name = "FILE")]
    pub pair: PathBuf,
}

#[derive(Args, Debug)]
pub struct ChowArgs {
    /// Integer matrix, rows indexed by target coordinates, e.g. "[[2,3]]"
    #[arg(long)]
    pub matrix: String,
    /// Number of target boundary factors
    #[arg(long)]
    pub s: usize,
    /// Use the Chow-ring product instead of the closed formula
    #[arg(long)]
    pub by_ring: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum WhichArg {
    Beta,
    Gamma,
}

#[derive(Args, Debug)]
pub struct BetaGammaArgs {
    /// Pair, toric cycle and abelian degree data (JSON)
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
    /// Index i
    #[arg(long)]
    pub i: usize,
    /// Which number to compute
    #[arg(long, value_enum, default_value = "beta")]
    pub which: WhichArg,
}

#[derive(Args, Debug)]
pub struct AlphaArgs {
    /// First intersection number
    #[arg(long, allow_hyphen_values = true)]
    pub deg1: String,
    /// Second intersection number
    #[arg(long, allow_hyphen_values = true)]
    pub deg2: String,
    /// Dimension r
    #[arg(long)]
    pub r: usize,
}

#[derive(Args, Debug)]
pub struct InputArgs {
    /// Input file (JSON)
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
}

#[derive(Args, Debug)]
pub struct FormArgs {
    /// Input file (JSON)
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
    /// Eigenvalue tolerance for the kernel rank
    #[arg(long, default_value_t = sak_core::chern::DEFAULT_EIGEN_TOL)]
    pub tol: f64,
    /// Also report kernel ranks at this many random translates
    #[arg(long, default_value_t = 0)]
    pub samples: usize,
}

#[derive(Args, Debug)]
pub struct QuadratureArgs {
    /// Input file (JSON)
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
    /// Stop when successive extrapolated values differ by less than this
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct BhcArgs {
    /// Curve (JSON)
    #[arg(long, value_name = "FILE")]
    pub curve: PathBuf,
    /// Max-norm bound on exponent vectors
    #[arg(long)]
    pub bound: u32,
    /// Write the table of intersection points as CSV
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("SAK_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Schema(format!("SAK_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Io(e.to_string()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_SCHEMA } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let result = configure_threads().and_then(|_| commands::dispatch(&cli));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sak: {e}");
            ExitCode::from(e.code() as u8)
        }
    }
}
