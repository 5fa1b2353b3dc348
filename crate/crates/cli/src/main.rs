//! Command-line driver: adaptive solves, excited-state ladders, dissociation
//! sweeps, strategy/flavor comparisons, spectra and pool listings.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use adapt_xstate::{Flavor, ScreeningStrategy};

#[derive(Parser, Debug)]
#[command(name = "adapt-xstate", version, about = "Adaptive VQE for molecular ground and excited states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one problem for a target state and write the trace CSV.
    Solve(SolveArgs),
    /// Solve every problem file in a directory and write one row per method.
    Sweep(SweepArgs),
    /// Run two configurations differing in strategy or flavor side by side.
    Compare(CompareArgs),
    /// Lowest eigenvalues by exact diagonalization.
    Spectrum(SpectrumArgs),
    /// List an element pool.
    Pool(PoolArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum PoolFlavor {
    Qubit,
    Fermionic,
}

impl From<PoolFlavor> for Flavor {
    fn from(p: PoolFlavor) -> Flavor {
        match p {
            PoolFlavor::Qubit => Flavor::Qubit,
            PoolFlavor::Fermionic => Flavor::Fermionic,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Strategy {
    Energy,
    Gradient,
}

impl From<Strategy> for ScreeningStrategy {
    fn from(s: Strategy) -> ScreeningStrategy {
        match s {
            Strategy::Energy => ScreeningStrategy::EnergyReduction,
            Strategy::Gradient => ScreeningStrategy::Gradient,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Ansatz {
    Adapt,
    Uccsd,
    Guccsd,
}

impl Ansatz {
    pub fn name(self) -> &'static str {
        match self {
            Ansatz::Adapt => "adapt",
            Ansatz::Uccsd => "uccsd",
            Ansatz::Guccsd => "guccsd",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Axis {
    Strategy,
    Flavor,
}

/// Options shared by every command that runs the solver.
#[derive(Args, Debug, Clone)]
pub struct SolverArgs {
    #[arg(long, value_enum, default_value = "qubit")]
    pub pool: PoolFlavor,
    #[arg(long, value_enum, default_value = "energy")]
    pub strategy: Strategy,
    #[arg(long, default_value_t = 1e-8)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 10)]
    pub n_candidates: usize,
    #[arg(long, default_value_t = 0)]
    pub target_state: usize,
    /// Penalty weight for every lower state [default: 2·Σ|h| + 1].
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 100)]
    pub max_iterations: usize,
    #[arg(long)]
    pub cost_model: Option<PathBuf>,
    /// Worker threads for screening and candidate refinement.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Screen with the closed-form single-parameter minimum.
    #[arg(long)]
    pub fast_screen: bool,
    /// Keep only spin-conserving excitations in the pool.
    #[arg(long)]
    pub spin_preserving: bool,
    /// Switch to gradient screening from this iteration on.
    #[arg(long)]
    pub gradient_switch: Option<usize>,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[arg(long)]
    pub hamiltonian: PathBuf,
    #[arg(long, value_enum, default_value = "adapt")]
    pub ansatz: Ansatz,
    /// Trace CSV destination [default: stdout].
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Directory for the found states (`state_<k>.qsv`).
    #[arg(long)]
    pub state_dir: Option<PathBuf>,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Directory of `.prob` files, one per bond length.
    #[arg(long)]
    pub dir: PathBuf,
    /// Additional fixed-ansatz baseline.
    #[arg(long, value_enum, default_value = "adapt")]
    pub ansatz: Ansatz,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[arg(long)]
    pub hamiltonian: PathBuf,
    #[arg(long, value_enum, default_value = "strategy")]
    pub axis: Axis,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[arg(long, required = true, num_args = 1..)]
    pub hamiltonian: Vec<PathBuf>,
    /// Number of eigenvalues per file.
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    /// Diagonalize the whole register instead of the electron-number sector.
    #[arg(long)]
    pub all_sectors: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PoolArgs {
    #[arg(long, required_unless_present = "hamiltonian")]
    pub n_qubits: Option<usize>,
    /// Take the register size (and electron count) from a problem file.
    #[arg(long)]
    pub hamiltonian: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "qubit")]
    pub pool: PoolFlavor,
    /// List the UCCSD elements instead of the full pool.
    #[arg(long)]
    pub uccsd: bool,
    #[arg(long)]
    pub n_electrons: Option<usize>,
    #[arg(long)]
    pub spin_preserving: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(a) => commands::solve(&a),
        Command::Sweep(a) => commands::sweep(&a),
        Command::Compare(a) => commands::compare(&a),
        Command::Spectrum(a) => commands::spectrum(&a),
        Command::Pool(a) => commands::pool(&a),
    };
    match outcome {
        Ok(commands::Status::Converged) => ExitCode::SUCCESS,
        Ok(commands::Status::NotConverged) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
