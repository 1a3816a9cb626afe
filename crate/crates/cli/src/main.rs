//! `quditlab` command-line front end.
//!
//! Exit codes: 0 on success (including a flagged non-convergence), 1 on a
//! runtime or numerical failure, 2 on a usage error.

mod commands;
mod raster;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::LazyLock;

use clap::{Args, Parser, Subcommand, ValueEnum};

static VERSION: LazyLock<String> = LazyLock::new(|| {
    format!(
        "{} (schema version {})",
        env!("CARGO_PKG_VERSION"),
        quditlab::SCHEMA_VERSION
    )
});

#[derive(Debug, Parser)]
#[command(name = "quditlab", version = VERSION.as_str(), about = "Entangled-qudit tomography and bit-commitment analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Paraxial mode calculations.
    #[command(subcommand)]
    Modes(ModesCommand),
    /// Simulate and reconstruct tomography data.
    #[command(subcommand)]
    Tomo(TomoCommand),
    /// Write a named two-qudit state as a density-matrix file.
    State(StateArgs),
    /// Entanglement report for a density matrix.
    Analyze(AnalyzeArgs),
    /// Bit-commitment security analysis.
    #[command(subcommand)]
    Bc(BcCommand),
}

#[derive(Debug, Subcommand)]
pub enum ModesCommand {
    /// Coefficients of a displaced vortex in the {G, LGV(0,+1)} basis.
    Decompose {
        /// Singularity displacement x0 in units of the waist.
        #[arg(long, allow_negative_numbers = true)]
        displacement: f64,
        #[arg(long, default_value_t = 1.0)]
        waist: f64,
        /// Compute the overlaps by quadrature instead of analytically.
        #[arg(long)]
        quadrature: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Gouy phase (N+1)·atan(z/z_R) of an order-N mode.
    Gouy {
        #[arg(long)]
        order: u32,
        #[arg(long, allow_negative_numbers = true)]
        z: f64,
        #[arg(long, default_value_t = 1.0)]
        zr: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Intensity and phase images of a mode, plus a JSON sidecar.
    Raster {
        /// `g`, `hg:R,S`, `lgv:P,L` or `displaced:X0` (X0 in waists).
        #[arg(long, value_parser = raster::FieldArg::parse)]
        mode: raster::FieldArg,
        #[arg(long, default_value_t = 1.0)]
        waist: f64,
        /// Pixels per side.
        #[arg(long, default_value_t = 256)]
        size: usize,
        /// Window half-width in waists.
        #[arg(long, default_value_t = 3.0)]
        half_width: f64,
        /// Writes `<out>.intensity.pgm`, `<out>.phase.pgm` and `<out>.json`.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SetArg {
    Minimal,
    Overcomplete,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ObjectiveArg {
    Poisson,
    LeastSquares,
}

#[derive(Debug, Subcommand)]
pub enum TomoCommand {
    /// Draw multinomial counts for a state over a measurement set.
    Simulate {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, value_enum, default_value_t = SetArg::Overcomplete)]
        set: SetArg,
        /// Shots per setting.
        #[arg(long, default_value_t = 10_000)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write noise-free expected counts instead of a random draw.
        #[arg(long)]
        expected: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Maximum-likelihood density matrix from a counts file.
    Reconstruct {
        #[arg(long)]
        counts: PathBuf,
        /// True state, for reporting the fidelity of the estimate.
        #[arg(long)]
        truth: Option<PathBuf>,
        #[arg(long)]
        max_iters: Option<usize>,
        #[arg(long)]
        restarts: Option<usize>,
        /// Seed for the restart perturbations.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = ObjectiveArg::Poisson)]
        objective: ObjectiveArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Family {
    /// (Σ|jj⟩)/√d
    PhiPlus,
    /// Non-maximally entangled family with parameter ε.
    Nonmax,
    /// p·Φ⁺ + (1-p)·I/4
    Werner,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Qudit dimension (2 or 3).
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// |ε| for the nonmax family.
    #[arg(long, default_value_t = 1.0)]
    pub epsilon: f64,
    /// arg(ε) in units of π.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phase: f64,
    /// Werner weight.
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    /// Admix white noise up to this normalized linear entropy.
    #[arg(long)]
    pub linear_entropy: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Density-matrix or reconstruction file.
    #[arg(long)]
    pub rho: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum BcCommand {
    /// Token states, (K, C) and the qubit-region verdict for a source state.
    Analyze {
        /// Two-qutrit density-matrix or reconstruction file.
        #[arg(long)]
        rho: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// All security curves as CSV with columns curve,param,K,C.
    Curves {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
