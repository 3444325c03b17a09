mod commands;
mod input;
mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qbf::format::{Kind, OracleKind};

/// Analysis of quantum boolean functions.
#[derive(Debug, Parser)]
#[command(name = "qbf", version)]
pub struct Cli {
    /// RNG seed; drawn from the OS when absent and always echoed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Operator file format.
    #[arg(long, global = true, value_enum, default_value_t = InputKind::Auto)]
    pub kind: InputKind,
    /// Operator built from a truth table.
    #[arg(long, global = true, value_enum, default_value_t = Oracle::Phase)]
    pub oracle: Oracle,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    #[value(alias = "json")]
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputKind {
    Auto,
    Dense,
    Spectrum,
    Truth,
}

impl From<InputKind> for Kind {
    fn from(k: InputKind) -> Kind {
        match k {
            InputKind::Auto => Kind::Auto,
            InputKind::Dense => Kind::Dense,
            InputKind::Spectrum => Kind::Spectrum,
            InputKind::Truth => Kind::Truth,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Oracle {
    Phase,
    Bit,
}

impl From<Oracle> for OracleKind {
    fn from(o: Oracle) -> OracleKind {
        match o {
            Oracle::Phase => OracleKind::Phase,
            Oracle::Bit => OracleKind::Bit,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Spectrum,
    Dense,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pauli spectrum of an operator.
    Spectrum {
        #[arg(long = "in")]
        input: PathBuf,
        /// Also report weight per level and degree.
        #[arg(long)]
        levels: bool,
    },
    /// Construct an operator.
    Build {
        /// Output format of the operator.
        #[arg(long, value_enum, default_value_t = Emit::Spectrum)]
        emit: Emit,
        #[command(subcommand)]
        what: BuildCommand,
    },
    /// Property tests.
    Test {
        #[command(subcommand)]
        what: TestCommand,
    },
    /// Goldreich-Levin heavy coefficient search.
    Gl {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        /// Answer weight queries exactly instead of by sampling.
        #[arg(long)]
        exact: bool,
    },
    /// Noise operator applied to the spectrum.
    Noise {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        epsilon: f64,
        /// Apply the depolarizing channel to the matrix instead.
        #[arg(long)]
        depolarize: bool,
    },
    /// Hypercontractivity and its corollaries.
    Hyper {
        #[command(subcommand)]
        what: HyperCommand,
    },
    /// Influences and influence inequalities (qubits are 1-based).
    Influence(InfluenceArgs),
    /// FKN checks.
    Fkn(FknArgs),
    /// Random spin chain dynamics.
    Dynamics {
        #[command(subcommand)]
        what: DynamicsCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum BuildCommand {
    /// Phase oracle of a truth table.
    Phase {
        /// Bits, index = big-endian input.
        #[arg(long)]
        truth: String,
    },
    /// Bit oracle on n + 1 qubits.
    Bit {
        #[arg(long)]
        truth: String,
    },
    /// I - 2P for a projector P.
    Projector {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Normalized combination of anticommuting Pauli strings.
    Combination {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        alphas: Vec<f64>,
        /// Pauli words such as XX,YI.
        #[arg(long, value_delimiter = ',')]
        strings: Vec<String>,
    },
    /// Matrix sign of a Hermitian operator.
    Sign {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Traceless version on one extra qubit.
    Balance {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Conjugation by X on one qubit.
    SpinFlip {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        qubit: usize,
    },
    /// Random quantum boolean function.
    RandomBoolean {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        traceless: bool,
    },
    /// Random Hermitian operator.
    RandomHermitian {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum TestCommand {
    Stabilizer {
        #[arg(long = "in")]
        input: PathBuf,
        /// Monte Carlo trials in addition to the exact probability.
        #[arg(long)]
        trials: Option<u64>,
    },
    Locality {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 6)]
        ceiling: usize,
    },
    Hastad {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        trials: Option<u64>,
        /// Decide dictatorship at this closeness instead.
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Optimal success probability of telling two operators apart.
    Discriminate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        other: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum HyperCommand {
    /// ‖T_ε f‖_q ≤ ‖f‖_p on one operator or a random grid.
    Check {
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        /// Defaults to √((p-1)/(q-1)).
        #[arg(long, allow_hyphen_values = true)]
        epsilon: Option<f64>,
        /// Random Hermitian operators, e.g. n=3,count=500.
        #[arg(long)]
        grid: Option<String>,
    },
    /// Hill-climb for the largest ‖T_ε f‖_q / ‖f‖_p.
    Search {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        #[arg(long, allow_hyphen_values = true)]
        epsilon: Option<f64>,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
    },
    LowDegree {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        q: f64,
    },
    Rank {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Level-1 weight of I - 2P for a projector P.
    Projector {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        q: f64,
    },
}

#[derive(Debug, Args)]
pub struct InfluenceArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub qubit: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub set: Option<Vec<usize>>,
    #[arg(long)]
    pub total: bool,
    #[arg(long)]
    pub poincare: bool,
    #[arg(long)]
    pub talagrand: bool,
    #[arg(long)]
    pub anticommuting_kkl: bool,
    #[arg(long, value_delimiter = ',')]
    pub bad_influence: Option<Vec<usize>>,
    /// Cross-check a single-qubit influence with this many Haar samples.
    #[arg(long)]
    pub haar: Option<usize>,
}

#[derive(Debug, Args)]
pub struct FknArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub two_norm: bool,
    #[arg(long)]
    pub exact: bool,
    #[arg(long)]
    pub infty: bool,
    /// Hermitian g for the ∞-norm variant.
    #[arg(long)]
    pub g: Option<PathBuf>,
    #[arg(long)]
    pub epsilon: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum DynamicsCommand {
    /// Discrepancy of truncated evolutions against the window size.
    Profile {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        qubit: usize,
        #[arg(long, default_value = "X")]
        pauli: String,
        #[arg(long, value_delimiter = ',')]
        radii: Option<Vec<usize>>,
    },
    /// Learn the evolved observable from queries.
    Learn {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        qubit: usize,
        #[arg(long, default_value = "X")]
        pauli: String,
        #[arg(long, default_value_t = 0.2)]
        gamma: f64,
        #[arg(long, default_value_t = 0.05)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        /// Independent learning runs on the same chain.
        #[arg(long, default_value_t = 1)]
        runs: usize,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
}

impl From<qbf::Error> for CliError {
    fn from(e: qbf::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let seed = cli.seed.unwrap_or_else(rand::random);
    let start = Instant::now();
    let report = match commands::run(&cli, seed) {
        Ok(r) => r,
        Err(CliError::Usage(m)) => {
            eprintln!("usage error: {m}");
            return ExitCode::from(2);
        }
        Err(CliError::Input(m)) => {
            eprintln!("input error: {m}");
            return ExitCode::from(2);
        }
    };
    let elapsed = start.elapsed();
    let rendered = match cli.format {
        Format::Text => report.text(elapsed),
        Format::Structured => {
            eprintln!("elapsed: {:.3} s", elapsed.as_secs_f64());
            report.structured()
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, rendered) {
                eprintln!("input error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{rendered}"),
    }
    match report.check_passed {
        Some(false) => ExitCode::from(1),
        _ => ExitCode::SUCCESS,
    }
}
