//! `weylkit`: command-line front end.
//!
//! Exit codes: 0 on success, 1 when a computation or validation fails, 2 on
//! usage, parse, shape or I/O errors.

mod commands;
mod defaults;
mod zgrid;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "weylkit", version, about = "Direct and inverse spectral problems via Weyl functions")]
struct Cli {
    /// Output directory, created if missing.
    #[arg(long, global = true, env = defaults::OUT_ENV, default_value = defaults::OUT_DIR)]
    out: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hamiltonian, fundamental solution and Weyl function of an explicit system.
    Direct(DirectArgs),
    /// Parameters and Hamiltonian from a realization of a rational Weyl function.
    Inverse(InverseArgs),
    /// Potential (Dirac) or Hamiltonian (canonical) from tabulated Weyl samples.
    Recover(RecoverArgs),
    /// Fundamental solution w(l, z) generated by a difference kernel.
    Fundamental(FundamentalArgs),
    /// Weyl function from its values on the lattice i(q + eps).
    Interpolate(InterpolateArgs),
    /// Run the invariant suite on the bundled fixtures.
    Check(CheckArgs),
}

/// Evaluation points: either a list of `--z` values or one `--zgrid`.
#[derive(Args, Debug, Clone)]
struct ZArgs {
    /// Evaluation point such as `0.5+1i`; may be repeated.
    #[arg(long = "z", allow_hyphen_values = true, conflicts_with = "zgrid")]
    z: Vec<String>,
    /// Grid `re0:re1:n×im0:im1:m`.
    #[arg(long, allow_hyphen_values = true)]
    zgrid: Option<String>,
}

#[derive(Args, Debug)]
struct DirectArgs {
    /// GbdtParams JSON.
    #[arg(long)]
    params: PathBuf,
    #[arg(long, default_value_t = defaults::XMAX)]
    xmax: f64,
    #[arg(long, default_value_t = defaults::NX)]
    nx: usize,
    #[command(flatten)]
    z: ZArgs,
}

#[derive(Args, Debug)]
struct InverseArgs {
    /// Realization JSON.
    #[arg(long)]
    realization: PathBuf,
    #[arg(long, default_value_t = defaults::XMAX)]
    xmax: f64,
    #[arg(long, default_value_t = defaults::NX)]
    nx: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum SystemKind {
    Dirac,
    Canonical,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Potential {
    Endpoint,
    KernelEdge,
}

#[derive(Args, Debug)]
struct RecoverArgs {
    /// CSV with columns `zeta, Re_00, Im_00, ...` holding φ(zeta + i eta).
    #[arg(long)]
    samples: PathBuf,
    #[arg(long, default_value_t = defaults::ETA)]
    eta: f64,
    #[arg(long, value_enum, default_value_t = SystemKind::Dirac)]
    mode: SystemKind,
    /// Diagonal of D for canonical systems, comma separated, all negative.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    d: Vec<f64>,
    #[arg(long, default_value_t = defaults::H)]
    h: f64,
    #[arg(long, default_value_t = defaults::L)]
    l: f64,
    /// Truncation of the line integral; defaults to 200 or the sample range.
    #[arg(long)]
    a: Option<f64>,
    #[arg(long, default_value_t = defaults::MU)]
    mu: f64,
    #[arg(long, default_value_t = defaults::TOLERANCE)]
    tolerance: f64,
    #[arg(long, value_enum, default_value_t = Potential::Endpoint)]
    potential: Potential,
}

#[derive(Args, Debug)]
struct FundamentalArgs {
    /// Kernel CSV `x, Re_00, Im_00, ...` on the midpoint grid `x = (j + 1/2) h`.
    #[arg(long)]
    kernel: PathBuf,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    d: Vec<f64>,
    #[arg(long, default_value_t = defaults::L)]
    l: f64,
    #[command(flatten)]
    z: ZArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum SeriesKind {
    General,
    WeylDirac,
    Shifted,
}

#[derive(Args, Debug)]
struct InterpolateArgs {
    /// CSV `q, Re_00, Im_00, ...` with rows q = 0, 1, ..., N.
    #[arg(long)]
    samples: PathBuf,
    #[arg(long, default_value_t = defaults::N)]
    n: usize,
    /// Lattice offset, read as an exact decimal.
    #[arg(long, default_value = defaults::EPS)]
    eps: String,
    #[arg(long, value_enum, default_value_t = SeriesKind::WeylDirac)]
    mode: SeriesKind,
    /// Shift of the lattice in `shifted` mode.
    #[arg(long, allow_hyphen_values = true)]
    z0: Option<String>,
    #[command(flatten)]
    z: ZArgs,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// Directory holding `check.json` and the files it names.
    #[arg(long)]
    fixtures: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("weylkit: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
