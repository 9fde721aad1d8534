use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::descriptor::InputDescriptor;
use crate::output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "gflat",
    version,
    about = "Exact dynamics of finite Glauber-Fock photonic lattices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues of the coupling matrix, ascending.
    Spectrum {
        #[command(flatten)]
        lattice: LatticeArgs,
        /// Add an `abs_lambda` column.
        #[arg(long)]
        abs: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Mean photon number per waveguide over time.
    Evolve {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Fidelity of a single-photon superposition with its evolved self.
    Fidelity {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Two-photon correlation maps.
    Correlation {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Spectral weights of one waveguide.
    Weights {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long, default_value_t = 0)]
        waveguide: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Finite lattice against the semi-infinite closed form at one time.
    CompareLimit {
        #[command(flatten)]
        lattice: LatticeArgs,
        /// Input waveguide.
        #[arg(long, default_value_t = 0)]
        waveguide: usize,
        #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
        time: f64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the oracle suite for every lattice up to `--n-max`.
    Verify {
        #[arg(long, visible_alias = "size")]
        n_max: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Args)]
pub struct LatticeArgs {
    /// Number of waveguides.
    #[arg(long)]
    pub size: usize,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// fock:p:m, superpos:j:k:alpha, product:j:k or noon:j:k:phi[:m].
    #[arg(long)]
    pub input: InputDescriptor,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub t_start: f64,
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    pub t_max: f64,
    /// Grid points including both end points.
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
    /// Explicit comma-separated times; replaces the grid.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub times: Option<Vec<f64>>,
    /// Interpret every time as a multiple of pi / (10 lambda_min).
    #[arg(long)]
    pub times_in_revival_units: bool,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub tol_unitarity: Option<f64>,
    #[arg(long)]
    pub tol_eigen: Option<f64>,
}
