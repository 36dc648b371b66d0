use std::path::PathBuf;

use chiral_core::fnspace::QuadratureSpec;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::funcspec::FunctionSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "chiral",
    version,
    about = "Free-boson current, Sugawara fields and charged ground states"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, Args)]
pub struct RunConfig {
    /// Fock-space level cutoff N
    #[arg(long, global = true, default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..=40))]
    pub cutoff: u32,
    /// Fourier modes kept for test functions (default depends on the command)
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..=1 << 16))]
    pub modes: Option<u64>,
    /// Gauss-Legendre nodes per panel of the line quadrature
    #[arg(long, global = true, default_value_t = 2048)]
    pub quad_nodes: usize,
    /// Angular distance from the point at infinity where line integrals stop
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub endpoint_cut: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to a file instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for randomized checks
    #[arg(long, global = true, default_value_t = 20_240_601)]
    pub seed: u64,
}

impl RunConfig {
    pub fn quadrature(&self) -> Result<QuadratureSpec, chiral_core::Error> {
        QuadratureSpec::new(self.quad_nodes, self.endpoint_cut)
    }

    pub fn modes_or(&self, default: usize) -> usize {
        self.modes.map_or(default, |m| m as usize)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the operator-identity suite and report residuals
    Verify {
        /// Drop the central term from the Virasoro checks (mutation test)
        #[arg(long)]
        drop_central_term: bool,
    },
    /// Estimate the central charge of the perturbed stress tensor
    Charge {
        /// Comma-separated κ values; an empty list gives an empty table
        #[arg(
            long,
            value_delimiter = ',',
            num_args = 0..,
            default_values_t = [0.0, 0.5, 1.0, 2.0],
            allow_negative_numbers = true
        )]
        kappa: Vec<f64>,
    },
    /// Tabulate charges and Sobolev distances of the g_n sequence
    Nonnormal(NonnormalArgs),
    /// Evaluate the charged ground state on a test function
    Ground(GroundArgs),
}

#[derive(Clone, Debug, Args)]
pub struct NonnormalArgs {
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub q: f64,
    /// First n; later rows double it
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    pub n_min: u32,
    #[arg(long, default_value_t = 1024, value_parser = clap::value_parser!(u32).range(1..))]
    pub n_max: u32,
}

#[derive(Clone, Debug, Args)]
pub struct GroundArgs {
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub q: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub kappa: f64,
    /// Test function: gn:<n>, bump:<center>:<width>[:<amp>] or fourier:a0,a1,b1,...
    #[arg(long, default_value = "bump:0:1", allow_hyphen_values = true)]
    pub function: FunctionSpec,
    /// Vector field h(θ)∂θ for the stress one-point value, as a fourier spec
    #[arg(
        long,
        default_value = "fourier:1.5,-2,0,0.5,0",
        allow_hyphen_values = true
    )]
    pub field: FunctionSpec,
    /// Dilation parameter s of the covariance check
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub dilation: f64,
    /// Translation of the covariance check
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub shift: f64,
    /// Size of the Gram family (the test function plus random bumps)
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..=64))]
    pub family: u64,
}
