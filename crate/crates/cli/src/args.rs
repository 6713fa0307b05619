use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "hlor", version, about = "Lorentzian extremals, attainable sets and distance on the Heisenberg group")]
pub struct Cli {
    /// Write the discrepancy ledger (JSON) to this path.
    #[arg(long, global = true, value_name = "PATH")]
    pub ledger: Option<PathBuf>,

    /// Print wall-clock time to stderr.
    #[arg(long, global = true)]
    pub timing: bool,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a closed-form extremal.
    Extremal(ExtremalArgs),
    /// Seeded sweep of closed forms against RK4.
    Verify(VerifyArgs),
    /// Attainable-set membership (P2) or a reaching plan (P1).
    Reach(ReachArgs),
    /// Lorentzian distance from the identity.
    Distance(DistanceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Problem {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Case {
    Normal,
    Abnormal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct ExtremalArgs {
    #[arg(long)]
    pub problem: Problem,
    #[arg(long = "case")]
    pub case: Case,
    /// Comma-separated `key=value` pairs: theta0, a (P1); h2_0, h3, h1_0 (P2).
    #[arg(long, value_name = "K=V,...", allow_hyphen_values = true)]
    pub params: String,
    #[arg(long)]
    pub tmax: f64,
    #[arg(long, default_value_t = 101)]
    pub samples: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub problem: Problem,
    #[arg(long = "case")]
    pub case: Case,
    #[arg(long, default_value_t = 50)]
    pub sweeps: usize,
    #[arg(long, default_value_t = 1e-4)]
    pub step: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Cap on |h3|·t1 for P2 draws, or `none`.
    #[arg(long, default_value = "8")]
    pub max_rapidity: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReachArgs {
    #[arg(long)]
    pub problem: Problem,
    /// Target point `x,y,z`.
    #[arg(long, value_name = "X,Y,Z", allow_hyphen_values = true)]
    pub point: String,
    /// P1: emit an admissible control schedule reaching the point.
    #[arg(long)]
    pub plan: bool,
    /// P1: prepend closed loops so the plan has at least this length.
    #[arg(long, value_name = "L")]
    pub loop_length: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DistanceArgs {
    #[arg(long)]
    pub problem: Problem,
    #[arg(long, value_name = "X,Y,Z", allow_hyphen_values = true)]
    pub point: String,
    /// Report every distinct converged solution.
    #[arg(long)]
    pub verbose: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
