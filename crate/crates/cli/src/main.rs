//! `parrondo` — simulate capital-dependent quantum Parrondo games, the
//! exact classical baseline, and the strategy-search experiments.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage error,
//! 3 sizing/overflow error.

mod commands;
mod manifest;
mod output;
mod params;

use clap::{Args, Parser, Subcommand};
use manifest::timestamp_now;
use params::{
    ClassicalParamsResolved, GateAngles, OutputFormat, QuantumParams, SearchParams, SweepParams,
};
use parrondo_core::classical::ClassicalError;
use parrondo_core::engine::EngineError;
use parrondo_core::quantum::{auto_capital_qubits, BMapping, GainFormula, QuantumError};
use parrondo_core::search::SearchError;
use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Sizing(String),
    Failure(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Sizing(msg) | CliError::Failure(msg) => {
                write!(f, "{msg}")
            }
        }
    }
}

impl CliError {
    fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Failure(_) => ExitCode::from(1),
            CliError::Usage(_) => ExitCode::from(2),
            CliError::Sizing(_) => ExitCode::from(3),
        }
    }
}

impl From<QuantumError> for CliError {
    fn from(err: QuantumError) -> Self {
        match &err {
            QuantumError::CapacityExceeded { .. } => CliError::Sizing(err.to_string()),
            QuantumError::Engine(EngineError::OffsetOutOfRange { .. })
            | QuantumError::Engine(EngineError::CapitalTooSmall(_)) => {
                CliError::Sizing(err.to_string())
            }
            QuantumError::ZeroIterations | QuantumError::Strategy(_) | QuantumError::Gate(_) => {
                CliError::Usage(err.to_string())
            }
            QuantumError::Engine(_) => CliError::Failure(err.to_string()),
        }
    }
}

impl From<ClassicalError> for CliError {
    fn from(err: ClassicalError) -> Self {
        CliError::Usage(err.to_string())
    }
}

impl From<SearchError> for CliError {
    fn from(err: SearchError) -> Self {
        match err {
            SearchError::Quantum(inner) => inner.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "parrondo",
    version,
    about = "Statevector simulator for capital-dependent quantum Parrondo games"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one quantum strategy and write its gain trajectory
    Quantum(QuantumArgs),
    /// Run the classical baseline (exact evolution, or Monte Carlo with --mc-trials)
    Classical(ClassicalArgs),
    /// Rank every strategy of a given length across offsets and conventions
    Search(SearchArgs),
    /// Run one strategy across several offsets and compare
    Sweep(SweepArgs),
    /// Run the self-check suites (arithmetic, oracle equivalence, conservation)
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
enum Preset {
    /// The standard twelve-angle coefficient set
    Table1,
}

#[derive(Args, Clone)]
struct GateArgs {
    /// Pin all twelve gate angles to a named coefficient set
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    #[arg(long, default_value_t = 0.0)]
    delta_a: f64,
    #[arg(long, default_value_t = 1.0)]
    alpha_a: f64,
    #[arg(long, default_value_t = 0.0)]
    beta_a: f64,
    #[arg(long, default_value_t = 2.0 * (std::f64::consts::FRAC_PI_2 + 0.01))]
    theta_a: f64,
    #[arg(long, default_value_t = 0.0)]
    delta_b1: f64,
    #[arg(long, default_value_t = 1.0)]
    alpha_b1: f64,
    #[arg(long, default_value_t = 0.0)]
    beta_b1: f64,
    #[arg(long, default_value_t = 2.0 * (std::f64::consts::PI / 10.0 + 0.01))]
    theta_b1: f64,
    #[arg(long, default_value_t = 0.0)]
    delta_b2: f64,
    #[arg(long, default_value_t = 1.0)]
    alpha_b2: f64,
    #[arg(long, default_value_t = 0.0)]
    beta_b2: f64,
    #[arg(long, default_value_t = 2.0 * (3.0 * std::f64::consts::FRAC_PI_4 + 0.01))]
    theta_b2: f64,
}

impl GateArgs {
    fn resolve(&self) -> GateAngles {
        match self.preset {
            Some(Preset::Table1) => GateAngles::table1(),
            None => GateAngles {
                delta_a: self.delta_a,
                alpha_a: self.alpha_a,
                beta_a: self.beta_a,
                theta_a: self.theta_a,
                delta_b1: self.delta_b1,
                alpha_b1: self.alpha_b1,
                beta_b1: self.beta_b1,
                theta_b1: self.theta_b1,
                delta_b2: self.delta_b2,
                alpha_b2: self.alpha_b2,
                beta_b2: self.beta_b2,
                theta_b2: self.theta_b2,
            },
        }
    }
}

#[derive(Args)]
struct QuantumArgs {
    /// Game sequence over {A, B}, e.g. ABBAB
    #[arg(long, required_unless_present = "manifest")]
    strategy: Option<String>,
    /// Times the strategy is repeated
    #[arg(long, default_value_t = 400)]
    iterations: usize,
    /// Initial capital offset from the register midpoint
    #[arg(long, default_value_t = 0)]
    offset: i64,
    /// Capital-register size in qubits; auto-sized from the run when omitted
    #[arg(long)]
    capital_qubits: Option<usize>,
    /// Which coin plays on capitals divisible by three
    #[arg(long, default_value = "paper")]
    b_mapping: BMapping,
    /// Gain readout: integer (dollars) or sigmaz (parity)
    #[arg(long, default_value = "integer")]
    gain_formula: GainFormula,
    #[command(flatten)]
    gates: GateArgs,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Output directory (default: parrondo-out/<subcommand>-<timestamp>)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Replay a previous run from its manifest; other flags are ignored
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct ClassicalArgs {
    /// Game sequence over {A, B}, e.g. ABBAB
    #[arg(long, required_unless_present = "manifest")]
    strategy: Option<String>,
    /// Number of elementary games
    #[arg(long, default_value_t = 500)]
    steps: usize,
    /// Bias subtracted from every win probability
    #[arg(long, default_value_t = 0.005)]
    epsilon: f64,
    #[arg(long, default_value_t = 0)]
    initial_capital: i64,
    /// Sample this many trajectories instead of evolving exactly
    #[arg(long)]
    mc_trials: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    /// Strategy length to enumerate exhaustively
    #[arg(long, default_value_t = 5)]
    length: usize,
    #[arg(long, default_value_t = 400)]
    iterations: usize,
    /// Comma-separated initial-capital offsets
    #[arg(long, default_value = "0,3", value_delimiter = ',')]
    offsets: Vec<i64>,
    /// Restrict to one coin mapping (default: run both)
    #[arg(long)]
    b_mapping: Option<BMapping>,
    /// Restrict to one gain formula (default: run both)
    #[arg(long)]
    gain_formula: Option<GainFormula>,
    /// Capital-register size shared by every run; auto-sized when omitted
    #[arg(long)]
    capital_qubits: Option<usize>,
    #[command(flatten)]
    gates: GateArgs,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Game sequence over {A, B}, e.g. BBABA
    #[arg(long, required_unless_present = "manifest")]
    strategy: Option<String>,
    /// Comma-separated initial-capital offsets
    #[arg(long, default_value = "0,3", value_delimiter = ',')]
    offsets: Vec<i64>,
    #[arg(long, default_value_t = 400)]
    iterations: usize,
    /// Capital-register size shared by every offset; auto-sized when omitted
    #[arg(long)]
    capital_qubits: Option<usize>,
    #[arg(long, default_value = "paper")]
    b_mapping: BMapping,
    #[arg(long, default_value = "integer")]
    gain_formula: GainFormula,
    #[command(flatten)]
    gates: GateArgs,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    /// Largest total register size the dense oracle may build (cap 10)
    #[arg(long, default_value_t = 9)]
    max_qubits: usize,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Quantum(args) => {
            let (params, seed, created_at) = match &args.manifest {
                Some(path) => commands::load_replay::<QuantumParams>(path, "quantum")?,
                None => {
                    let strategy = args.strategy.clone().expect("required by clap");
                    let games = args
                        .iterations
                        .saturating_mul(strategy.chars().count().max(1));
                    let capital_qubits = args
                        .capital_qubits
                        .unwrap_or_else(|| auto_capital_qubits(games, args.offset));
                    (
                        QuantumParams {
                            strategy,
                            iterations: args.iterations,
                            offset: args.offset,
                            capital_qubits,
                            gates: args.gates.resolve(),
                            b_mapping: args.b_mapping,
                            gain_formula: args.gain_formula,
                            format: args.format,
                        },
                        None,
                        timestamp_now(),
                    )
                }
            };
            commands::run_quantum(params, seed, created_at, args.out)
        }
        Command::Classical(args) => {
            let (params, _seed, created_at) = match &args.manifest {
                Some(path) => commands::load_replay::<ClassicalParamsResolved>(path, "classical")?,
                None => (
                    ClassicalParamsResolved {
                        strategy: args.strategy.clone().expect("required by clap"),
                        steps: args.steps,
                        epsilon: args.epsilon,
                        initial_capital: args.initial_capital,
                        mc_trials: args.mc_trials,
                        seed: args.seed,
                        format: args.format,
                    },
                    None,
                    timestamp_now(),
                ),
            };
            commands::run_classical(params, created_at, args.out)
        }
        Command::Search(args) => {
            let (params, _seed, created_at) = match &args.manifest {
                Some(path) => commands::load_replay::<SearchParams>(path, "search")?,
                None => {
                    let games = args.iterations.saturating_mul(args.length.max(1));
                    let max_offset = args
                        .offsets
                        .iter()
                        .map(|o| o.unsigned_abs())
                        .max()
                        .unwrap_or(0) as i64;
                    let capital_qubits = args
                        .capital_qubits
                        .unwrap_or_else(|| auto_capital_qubits(games, max_offset));
                    let b_mappings = match args.b_mapping {
                        Some(m) => vec![m],
                        None => vec![BMapping::Paper, BMapping::Classical],
                    };
                    let gain_formulas = match args.gain_formula {
                        Some(g) => vec![g],
                        None => vec![GainFormula::Integer, GainFormula::SigmaZ],
                    };
                    (
                        SearchParams {
                            length: args.length,
                            iterations: args.iterations,
                            offsets: args.offsets.clone(),
                            capital_qubits,
                            gates: args.gates.resolve(),
                            b_mappings,
                            gain_formulas,
                            format: args.format,
                        },
                        None,
                        timestamp_now(),
                    )
                }
            };
            commands::run_search(params, created_at, args.out)
        }
        Command::Sweep(args) => {
            let (params, _seed, created_at) = match &args.manifest {
                Some(path) => commands::load_replay::<SweepParams>(path, "sweep")?,
                None => {
                    let strategy = args.strategy.clone().expect("required by clap");
                    let games = args
                        .iterations
                        .saturating_mul(strategy.chars().count().max(1));
                    let max_offset = args
                        .offsets
                        .iter()
                        .map(|o| o.unsigned_abs())
                        .max()
                        .unwrap_or(0) as i64;
                    let capital_qubits = args
                        .capital_qubits
                        .unwrap_or_else(|| auto_capital_qubits(games, max_offset));
                    (
                        SweepParams {
                            strategy,
                            iterations: args.iterations,
                            offsets: args.offsets.clone(),
                            capital_qubits,
                            gates: args.gates.resolve(),
                            b_mapping: args.b_mapping,
                            gain_formula: args.gain_formula,
                            format: args.format,
                        },
                        None,
                        timestamp_now(),
                    )
                }
            };
            commands::run_sweep(params, created_at, args.out)
        }
        Command::Validate(args) => commands::run_validate(args.max_qubits, args.seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}
