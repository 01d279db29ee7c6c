//! `alphaperm`: compute alpha-permanents, generate PSD instances, run the
//! identity and inequality suites, hunt for counterexamples, benchmark.
//!
//! Exit codes: 0 success, 1 verified violation, 2 usage, 3 malformed input,
//! 4 capacity exceeded.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use alphaperm::Caps;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "alphaperm", version, about = "Exact alpha-permanents and permanental inequalities")]
struct Cli {
    #[command(flatten)]
    caps: CapArgs,
    #[command(subcommand)]
    command: Command,
}

/// Kernel size limits. Unset flags fall back to `ALPHAPERM_CAP_*`, then to
/// the built-in defaults.
#[derive(Args, Debug)]
struct CapArgs {
    #[arg(long, global = true, value_name = "N")]
    cap_naive: Option<usize>,
    #[arg(long, global = true, value_name = "N")]
    cap_dp: Option<usize>,
    #[arg(long, global = true, value_name = "N")]
    cap_ryser: Option<usize>,
    #[arg(long, global = true, value_name = "N")]
    cap_hafnian: Option<usize>,
    #[arg(long, global = true, value_name = "N")]
    cap_assignments: Option<u64>,
}

impl CapArgs {
    fn resolve(&self) -> alphaperm::Result<Caps> {
        let mut caps = Caps::from_env()?;
        caps.naive = self.cap_naive.unwrap_or(caps.naive);
        caps.dp = self.cap_dp.unwrap_or(caps.dp);
        caps.ryser = self.cap_ryser.unwrap_or(caps.ryser);
        caps.hafnian = self.cap_hafnian.unwrap_or(caps.hafnian);
        caps.assignments = self.cap_assignments.unwrap_or(caps.assignments);
        Ok(caps)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a kernel on a matrix file (`-` reads stdin).
    Compute {
        #[command(subcommand)]
        quantity: Quantity,
    },
    /// Write a random Gram (PSD) matrix file.
    Gen(GenArgs),
    /// Run the identity and inequality suites on generated instances.
    Check(CheckArgs),
    /// Search for violations of the Lieb-type and Marcus inequalities.
    Hunt(HuntArgs),
    /// Time kernels over a range of sizes.
    Bench(BenchArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Float,
}

#[derive(Args, Debug)]
struct ModeArgs {
    #[arg(long, value_enum, default_value = "exact")]
    mode: Mode,
    /// Relative tolerance in float mode.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Algo {
    Dp,
    Naive,
}

#[derive(Subcommand, Debug)]
enum Quantity {
    /// per_alpha(A).
    PerAlpha {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, value_enum, default_value = "dp")]
        algo: Algo,
        file: PathBuf,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Permanent by Ryser's formula.
    Per {
        file: PathBuf,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Determinant.
    Det {
        file: PathBuf,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Hafnian of a symmetric matrix of even dimension.
    Haf {
        file: PathBuf,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// det_alpha(A) = alpha^n per_{1/alpha}(A).
    AlphaDet {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        file: PathBuf,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// per_beta(A, k): ordered k-block partitions of per_beta block products.
    PerBetaK {
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long)]
        k: usize,
        file: PathBuf,
        #[command(flatten)]
        mode: ModeArgs,
    },
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    /// `real` or `hermitian`.
    #[arg(long, default_value = "real")]
    kind: String,
    /// Entries of the factor are p/q with |p|, q <= scale.
    #[arg(long, default_value_t = 4)]
    scale: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of columns of the factor.
    #[arg(long)]
    rank: Option<usize>,
    /// Make every diagonal entry exactly 1.
    #[arg(long)]
    unit_diagonal: bool,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// `identities`, `inequalities` or `all`.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 5)]
    n_max: usize,
    #[arg(long, default_value_t = 50)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `theorem2`, `relaxed`, or a comma-separated list.
    #[arg(long, default_value = "theorem2", allow_hyphen_values = true)]
    alpha_set: String,
    /// Also check these matrix files.
    #[arg(long = "matrix")]
    matrices: Vec<PathBuf>,
    /// Findings output (JSON lines); stdout when omitted.
    #[arg(long)]
    findings: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[command(flatten)]
    mode: ModeArgs,
}

#[derive(Args, Debug)]
struct HuntArgs {
    /// Repeatable or comma-separated: marcus, half-marcus, lieb-type,
    /// lieb-alpha, neg-positivity, neg-fischer, half-lieb.
    #[arg(long = "target", value_delimiter = ',', required = true)]
    targets: Vec<String>,
    #[arg(long, conflicts_with_all = ["n_min", "n_max"])]
    n: Option<usize>,
    #[arg(long)]
    n_min: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    /// `lo:hi`; rationals with denominators up to 16 plus both endpoints.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["alpha", "alpha_grid"])]
    alpha_range: Option<String>,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "alpha_grid")]
    alpha: Option<String>,
    /// Comma-separated values used cyclically by trial index.
    #[arg(long, allow_hyphen_values = true)]
    alpha_grid: Option<String>,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `real`, `hermitian` or `mixed`.
    #[arg(long, default_value = "mixed")]
    kind: String,
    #[arg(long, default_value_t = 4)]
    scale: u32,
    #[arg(long)]
    rank: Option<usize>,
    /// Keep the general diagonal instead of normalizing it to 1.
    #[arg(long)]
    no_normalize: bool,
    /// Record this many smallest-slack comparisons per target.
    #[arg(long, default_value_t = 0)]
    keep_smallest: usize,
    /// Findings file (JSON lines). Minimizing instances are written next to
    /// it as `<out>.<target>.argmin.mat`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Stamp findings with the current time.
    #[arg(long)]
    timestamp: bool,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum BenchKernel {
    Naive,
    Dp,
    Ryser,
    Det,
    Haf,
    All,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long, value_enum, default_value = "all")]
    kernel: BenchKernel,
    #[arg(long, default_value_t = 2)]
    n_min: usize,
    #[arg(long, default_value_t = 8)]
    n_max: usize,
    #[arg(long, default_value_t = 3)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    mode: ModeArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("alphaperm: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
