//! `minkval`: exact Minkowski valuations on polytopes from the command line.

mod checks;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};

use minkval_core::harness::REPORT_SCHEMA;
use minkval_core::io::FORMAT_VERSION;

#[derive(Parser, Debug)]
#[command(name = "minkval", about = "Exact-arithmetic Minkowski valuations on polytopes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Canonicalize a polytope file (vertices of its convex hull).
    Hull {
        input: PathBuf,
        /// Write the result here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate an operator or family member at a set of directions.
    Op(OpArgs),
    /// Run harness checks and stream one JSON report per line.
    Check(CheckArgs),
    /// Recover family coefficients from an operator given as a file.
    Recover(RecoverArgs),
    /// Run a demonstration.
    Demo(DemoArgs),
    /// Emit CSV support-function samples for plotting.
    Sample(SampleArgs),
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("operator").required(true).args(["name", "spec"])))]
pub struct OpArgs {
    /// Operator name: Id, Neg, OHull, NegOHull, m, mstar, M, Mstar, Pi, Diff, Gamma.
    #[arg(long)]
    pub name: Option<String>,
    /// Family member such as "np1:1,0,2,1" or "d1:1,0,0,0".
    #[arg(long)]
    pub spec: Option<String>,
    #[arg(long)]
    pub body: PathBuf,
    /// Direction file; defaults to the deterministic sign-vector set.
    #[arg(long, env = "MINKVAL_DIRS")]
    pub dirs: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    /// Run every check.
    #[arg(long, conflicts_with = "check")]
    pub all: bool,
    /// A check to run; may be repeated.
    #[arg(long, value_enum)]
    pub check: Vec<checks::CheckName>,
    /// Restrict operator-based checks to this operator.
    #[arg(long)]
    pub op: Option<String>,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, env = "MINKVAL_SEED", default_value_t = 7)]
    pub seed: u64,
    /// Seeded random directions added to the deterministic set.
    #[arg(long, default_value_t = 32)]
    pub random_directions: usize,
    /// Direction file replacing the default set.
    #[arg(long, env = "MINKVAL_DIRS")]
    pub dirs: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FamilyArg {
    D1,
    Np1,
}

#[derive(Args, Debug)]
pub struct RecoverArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// JSON file naming the operator: {"spec": "d1:1,0,0,0"}, {"operator": "M"}
    /// or {"family": "np1", "coefficients": [...]}.
    #[arg(long)]
    pub via: PathBuf,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Random polytopes used to validate the recovered coefficients.
    #[arg(long, default_value_t = 3)]
    pub validation_trials: usize,
    #[arg(long, env = "MINKVAL_SEED", default_value_t = 7)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Demo {
    /// M* is not a combination of m, m_o, M and M_o.
    Independence,
    /// Certified volume inequality for the moment body against the ball.
    Corollary,
}

#[derive(Args, Debug)]
pub struct DemoArgs {
    #[arg(value_enum)]
    pub which: Demo,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long, env = "MINKVAL_SEED", default_value_t = 7)]
    pub seed: u64,
    /// Directions for the corollary sandwich.
    #[arg(long, default_value_t = 300)]
    pub directions: usize,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("operator").required(true).args(["op", "spec"])))]
pub struct SampleArgs {
    #[arg(long)]
    pub body: PathBuf,
    #[arg(long)]
    pub op: Option<String>,
    #[arg(long)]
    pub spec: Option<String>,
    /// Samples per circle in the plane; longitude x latitude cells in space.
    #[arg(long, default_value_t = 64)]
    pub grid: usize,
    /// Directions are rounded to this many binary digits.
    #[arg(long, default_value_t = 12)]
    pub bits: u32,
}

fn version() -> String {
    format!(
        "{} (library {}, format {FORMAT_VERSION}, report schema {REPORT_SCHEMA})",
        env!("CARGO_PKG_VERSION"),
        minkval_core::VERSION
    )
}

fn main() -> ExitCode {
    let cmd = Cli::command().version(Box::leak(version().into_boxed_str()) as &str);
    let cli = match Cli::from_arg_matches(&cmd.get_matches()) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match commands::run(cli.command) {
        Ok(code) => code,
        Err(e) if commands::closed_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
