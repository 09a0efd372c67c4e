//! Command-line front end for `qiham-core`: run configuration, CSV formats
//! and the six subcommands.
//!
//! Exit codes: 0 on success, 2 when input cannot be read or parsed, 3 when
//! it parses but violates a domain contract.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub mod commands;
pub mod config;
mod error;
pub mod table;

pub use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "qiham",
    version,
    about = "Masked-Hamiltonian evolution and kill-web scenarios"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Purity, entropy, coherence and trace of a density matrix.
    Metrics(MetricsArgs),
    /// Best rank-1 alignment of a two-state superposition against the
    /// classical mixture.
    Score(ScoreArgs),
    /// Evolve a masked Hamiltonian and write its trace and heatmaps.
    Evolve(RunArgs),
    /// Run the kill-web scenario, optionally over many seeds or with a
    /// parameter search.
    Killweb(KillwebArgs),
    /// Mean subsystem entropy of random bipartite pure states.
    Page(PageArgs),
    /// Sample the torus traced by a two-component superposition.
    Torus(TorusArgs),
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    /// Matrix CSV of `a+bi` cells, or the real part when `--imag` is given.
    pub input: PathBuf,
    /// Imaginary part, same shape as INPUT.
    #[arg(long)]
    pub imag: Option<PathBuf>,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda1: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub e0: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub e1: f64,
    /// Also write `score.csv` here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// `key = value` run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Overrides the config's `seed`.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Overrides the config's `out_dir` (default `out`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Overrides the config's `snapshot_stride`.
    #[arg(long)]
    pub stride: Option<usize>,
}

#[derive(Debug, Args)]
pub struct KillwebArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Run this many consecutive seeds, each into `seed_<s>/`.
    #[arg(long)]
    pub seeds: Option<usize>,
    /// Search weights and energies for the largest peak two-norm first.
    #[arg(long)]
    pub optimize: bool,
}

#[derive(Debug, Args)]
pub struct PageArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also write `page.csv` here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TorusArgs {
    #[arg(long)]
    pub lambda0: f64,
    #[arg(long)]
    pub lambda1: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub e0: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub e1: f64,
    #[arg(long)]
    pub steps: usize,
    #[arg(long)]
    pub t_max: f64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

/// Runs a parsed command and returns the text report for stdout.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Metrics(a) => commands::metrics(a),
        Command::Score(a) => commands::score(a),
        Command::Evolve(a) => commands::evolve(a),
        Command::Killweb(a) => commands::killweb(a),
        Command::Page(a) => commands::page(a),
        Command::Torus(a) => commands::torus(a),
    }
}
