use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use tmdyn_core::{Direction, HaltingMode};

#[derive(Debug, Parser)]
#[command(name = "tmdyn", version, about = "Turing machines as dynamical systems")]
pub struct Cli {
    /// Built-in machine (utm_6_4, wutm_6_2).
    #[arg(long, global = true, conflicts_with = "file", value_name = "NAME")]
    pub machine: Option<String>,

    /// Machine description file.
    #[arg(long, global = true, value_name = "PATH")]
    pub file: Option<PathBuf>,

    /// Print JSON instead of text, CSV or dot.
    #[arg(long, global = true)]
    pub json: bool,

    #[arg(long, global = true, value_enum, default_value_t = Mode::Fixpoint)]
    pub halting_mode: Mode,

    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Fixpoint,
    Restart,
}

impl From<Mode> for HaltingMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Fixpoint => HaltingMode::Fixpoint,
            Mode::Restart => HaltingMode::Restart,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// φ table, ε-graphs, regularity verdicts and the entropy certificate.
    Analyze(AnalyzeArgs),
    /// One ε-graph as dot.
    Graph(GraphArgs),
    /// Exact word counts and entropy estimates.
    Entropy(EntropyArgs),
    /// Run the global transition map.
    Simulate(SimulateArgs),
    /// The generalized shift of the machine.
    Gshift(GshiftArgs),
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Append word counts for n = 1..=N.
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    pub n_max: Option<u64>,

    /// Random configurations for the conjugacy check.
    #[arg(long, default_value_t = 1000)]
    pub samples: u64,

    /// Write the report here instead of stdout.
    #[arg(long, short, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// +1 or -1.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_direction)]
    pub eps: Direction,

    #[arg(long, value_enum, default_value_t = GraphFormat::Dot)]
    pub format: GraphFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphFormat {
    Dot,
    Json,
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    pub n_max: u64,

    /// Cross-check rows with n ≤ 4 against brute-force enumeration.
    #[arg(long)]
    pub oracle: bool,

    #[arg(long, value_name = "NODES")]
    pub node_budget: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Start state (default: the initial state).
    #[arg(long)]
    pub state: Option<String>,

    /// Tape contents, e.g. "b c" or "g . b c"; the cell after `.` is under
    /// the head, otherwise the first symbol is.
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    pub tape: String,

    #[arg(long)]
    pub steps: u64,

    /// Print every configuration, not only the last.
    #[arg(long)]
    pub trace: bool,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("action").required(true).args(["verify", "dump"])))]
pub struct GshiftArgs {
    /// Check conjugacy on this many random configurations.
    #[arg(long, value_name = "SAMPLES")]
    pub verify: Option<u64>,

    /// Print the compiled shift table.
    #[arg(long)]
    pub dump: bool,
}

fn parse_direction(s: &str) -> Result<Direction, String> {
    match s {
        "+1" | "1" => Ok(Direction::Plus),
        "-1" => Ok(Direction::Minus),
        _ => Err(format!("expected +1 or -1, got `{s}`")),
    }
}
