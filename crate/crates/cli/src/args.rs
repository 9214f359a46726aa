use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use uncertainty_core::states::Axis;

#[derive(Parser, Debug)]
#[command(name = "uncertainty", version)]
#[command(about = "Absolute central moments and any-order uncertainty inequality checks")]
pub struct Cli {
    /// JSON settings file (a previous run's manifest also works)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,

    #[arg(long, global = true)]
    pub abs_tol: Option<f64>,

    /// Quadrature evaluation budget per integral
    #[arg(long, global = true)]
    pub max_evals: Option<usize>,

    /// Relative slack: lhs ≤ rhs + slack·max(1, rhs)
    #[arg(long, global = true)]
    pub slack: Option<f64>,

    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Output file (stdout when absent)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Report divergent required moments without failing the run
    #[arg(long, global = true)]
    pub allow_divergent: bool,

    #[arg(long, global = true, value_enum)]
    pub units: Option<Units>,

    /// Fault injection for testing the harness itself.
    #[arg(long, global = true, value_enum, hide = true)]
    pub mutate: Option<Mutation>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    Natural,
    Si,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mutation {
    /// Judge every check as `rhs ≤ lhs + slack`
    Flip,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Canonical any-order check on the hydrogen ground state
    Hydrogen(HydrogenArgs),
    /// Grid of (p, q) checks on one state
    Sweep(SweepArgs),
    /// Finite-dimensional operator chain
    Finite(FiniteArgs),
    /// Discrete Hölder and Schwarz checks on tabulated data
    Holder(HolderArgs),
    /// Central-field energies, threshold root and potential bounds
    Central(CentralArgs),
}

#[derive(Args, Debug)]
pub struct HydrogenArgs {
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub q: f64,
    /// Sets both axes
    #[arg(long, conflicts_with_all = ["i", "j"])]
    pub axis: Option<Axis>,
    /// Position axis
    #[arg(long)]
    pub i: Option<Axis>,
    /// Momentum axis
    #[arg(long)]
    pub j: Option<Axis>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepCheck {
    Canonical,
    Reciprocal,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// hydrogen, r4test, qho, gaussian or grid:PATH
    #[arg(long, default_value = "hydrogen")]
    pub state: String,
    #[arg(long, value_enum, default_value = "canonical")]
    pub check: SweepCheck,
    /// Comma list or start:end:count
    #[arg(long)]
    pub p_grid: String,
    #[arg(long)]
    pub q_grid: String,
    #[arg(long, conflicts_with_all = ["i", "j"])]
    pub axis: Option<Axis>,
    #[arg(long)]
    pub i: Option<Axis>,
    #[arg(long)]
    pub j: Option<Axis>,
    /// `u ~ r^s0` at the first point of a radial grid
    #[arg(long)]
    pub origin_power: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Pair {
    PauliXy,
    TruncatedXp,
    Random,
}

#[derive(Args, Debug)]
pub struct FiniteArgs {
    #[arg(long, value_enum)]
    pub pair: Pair,
    #[arg(long)]
    pub dim: Option<usize>,
    /// ground or excited:K (basis state K)
    #[arg(long, default_value = "ground")]
    pub state: String,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,
    /// Oscillator frequency of the truncated pair
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
}

#[derive(Args, Debug)]
pub struct HolderArgs {
    /// CSV with columns f,g[,w]
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,
}

#[derive(Args, Debug)]
pub struct CentralArgs {
    /// hydrogen, r4test or grid:PATH
    #[arg(long, default_value = "hydrogen")]
    pub state: String,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// gamma,r0,sigma
    #[arg(long, value_delimiter = ',')]
    pub buckingham: Option<Vec<f64>>,
    /// epsilon,sigma
    #[arg(long, value_delimiter = ',')]
    pub lj: Option<Vec<f64>>,
    #[arg(long)]
    pub origin_power: Option<f64>,
}
