//! `qdkd`: security bounds, attack evaluation and protocol simulation for
//! Quantum Dense Key Distribution.
//!
//! Exit codes: 0 success or secure, 1 I/O failure, 2 invalid input,
//! 3 insecure verdict or aborted session.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::Outcome;

#[derive(Parser, Debug)]
#[command(name = "qdkd", version, about = "Quantum Dense Key Distribution security laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Holevo bounds at given statistics, for fixed (c, d) or maximized over them.
    Bounds(BoundsArgs),
    /// Maximal-information surface over the (P01, P10) square as CSV.
    Surface(SurfaceArgs),
    /// Statistics, overlaps and information bounds of one attack.
    AttackEval(AttackEvalArgs),
    /// Monte Carlo protocol session.
    Simulate(SimulateArgs),
    /// Verdict for lossy experimental statistics.
    Analyze(AnalyzeArgs),
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[arg(long)]
    pub p01: f64,
    #[arg(long)]
    pub p10: f64,
    #[arg(long, allow_hyphen_values = true, requires = "d", conflicts_with = "maximize")]
    pub c: Option<f64>,
    #[arg(long, allow_hyphen_values = true, requires = "c", conflicts_with = "maximize")]
    pub d: Option<f64>,
    /// Maximize both bounds over Eve's parameters.
    #[arg(long, required_unless_present = "c")]
    pub maximize: bool,
    /// Cross-check the maxima against a grid search.
    #[arg(long, requires = "maximize")]
    pub verify: bool,
    /// Grid step for --verify.
    #[arg(long, default_value_t = 1e-3, requires = "verify")]
    pub step: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SurfaceArgs {
    /// be (Bob-Eve) or ae (Alice-Eve).
    #[arg(long)]
    pub which: String,
    /// Points per axis.
    #[arg(long, default_value_t = 51)]
    pub grid: usize,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct AttackSource {
    /// Built-in attack: identity, bitflip, vacuum_swap or intercept.
    #[arg(long)]
    pub name: Option<String>,
    /// Attack file with J and K matrices.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AttackEvalArgs {
    #[command(flatten)]
    pub source: AttackSource,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long)]
    pub rounds: usize,
    #[arg(long, default_value = "identity", conflicts_with = "attack_file")]
    pub attack: String,
    #[arg(long)]
    pub attack_file: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// random_key, bob_to_alice or alice_to_bob.
    #[arg(long, default_value = "random_key")]
    pub mode: String,
    /// Message bits for the deterministic modes, e.g. 1011.
    #[arg(long)]
    pub message: Option<String>,
    /// Per-round CSV trace destination.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[arg(long, default_value_t = 0.5)]
    pub check_probability: f64,
    #[arg(long, default_value_t = 0.1)]
    pub sacrifice_fraction: f64,
    /// Leave Bell-analysis failures out of the QBER (trusted detectors).
    #[arg(long)]
    pub exclude_bell_failures: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub p_loss: f64,
    #[arg(long)]
    pub p_corr: f64,
    /// Detection losses are not attributed to Eve.
    #[arg(long)]
    pub trusted: bool,
    #[arg(long, default_value_t = 0.0)]
    pub qber: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bounds(a) => commands::bounds(&a),
        Command::Surface(a) => commands::surface(&a),
        Command::AttackEval(a) => commands::attack_eval(&a),
        Command::Simulate(a) => commands::simulate(&a),
        Command::Analyze(a) => commands::analyze(&a),
    };
    match result {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Insecure) => ExitCode::from(3),
        Err(e) => {
            eprintln!("qdkd: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
