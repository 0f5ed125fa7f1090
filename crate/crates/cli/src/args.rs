use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Colored/white noise two-photon states: spectra, separability, CHSH
/// maximization, Monte Carlo and noise fitting. Tables are written as CSV.
#[derive(Debug, Parser)]
#[command(name = "polcorr", version)]
pub struct RunConfig {
    /// Decimal places for every printed float.
    #[arg(long, global = true, default_value_t = 6, value_parser = clap::value_parser!(u8).range(1..=15))]
    pub precision: u8,

    /// Read and print analyzer angles in degrees instead of radians.
    #[arg(long, global = true)]
    pub degrees: bool,

    /// Write the result to this file instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Grid {
    /// Grid points per axis (p and r both run over [0, 1]).
    #[arg(long, default_value_t = 101, value_parser = clap::value_parser!(u32).range(2..))]
    pub grid: u32,
}

#[derive(Debug, Args)]
pub struct Noise {
    /// Weight of the pure |Φ+> component.
    #[arg(long)]
    pub p: f64,
    /// Weight of the colored noise.
    #[arg(long)]
    pub r: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum AnglePolicy {
    /// r = 1 - p (no white noise)
    Colored,
    /// r = (1 - p)/2 (equal white and colored weights)
    Half,
    /// r = 0 (no colored noise)
    Werner,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ThresholdPolicy {
    Colored,
    Half,
    Werner,
    /// white share of the total noise fixed at --level
    WhiteFrac,
    /// absolute white-noise weight fixed at --level (p + r = 1 - level)
    WhiteWeight,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Von Neumann entropy (bits) over the (p, r) triangle.
    Entropy(Grid),
    /// Partial-transpose separability over the (p, r) triangle.
    Separability(Grid),
    /// Analytic Bell value at given angles, with the trace-formula magnitude.
    Beta {
        #[command(flatten)]
        noise: Noise,
        #[arg(long, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, allow_negative_numbers = true)]
        phi: f64,
    },
    /// Maximal |β| and the maximizing angles.
    BetaMax {
        #[command(flatten)]
        noise: Noise,
    },
    /// Maximal |β| over the (p, r) triangle.
    BetaMaxSurface(Grid),
    /// Maximizing angles along a noise policy, p on a uniform grid.
    Angles {
        #[arg(long, value_enum)]
        policy: AnglePolicy,
        #[command(flatten)]
        grid: Grid,
    },
    /// Smallest p with a CHSH violation along a noise policy.
    Threshold {
        #[arg(long, value_enum)]
        policy: ThresholdPolicy,
        /// White-noise level for white-frac and white-weight.
        #[arg(long)]
        level: Option<f64>,
    },
    /// Monte Carlo estimate of β from finite counts.
    Simulate {
        #[command(flatten)]
        noise: Noise,
        /// Defaults to the maximizing angle.
        #[arg(long, allow_negative_numbers = true)]
        theta: Option<f64>,
        /// Defaults to the maximizing angle.
        #[arg(long, allow_negative_numbers = true)]
        phi: Option<f64>,
        /// Joint outcomes drawn per analyzer pair.
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Fit r to measured maximal Bell values (CSV with header `p,beta_exp`).
    Fit {
        #[arg(long)]
        input: PathBuf,
    },
    /// Maximal |β| versus p with a fixed white share of the total noise.
    Curve {
        #[arg(long)]
        white_frac: f64,
        #[command(flatten)]
        grid: Grid,
    },
}
