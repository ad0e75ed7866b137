use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "polychain",
    version,
    about = "Extremal polyomino chains for degree-based topological indices"
)]
pub struct Cli {
    #[command(flatten)]
    pub index: IndexArgs,

    /// Write output here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct IndexArgs {
    /// Preset index: azi, zagreb1, zagreb2, randic, abc, ga, harmonic,
    /// sum_connectivity. `randic(-0.5)` sets the exponent inline.
    #[arg(long, global = true, value_name = "NAME")]
    pub index: Option<String>,

    /// Exponent for `--index randic`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub gamma: Option<f64>,

    /// Custom index document (JSON).
    #[arg(long, global = true, value_name = "PATH", conflicts_with = "index")]
    pub index_file: Option<PathBuf>,

    /// Arithmetic override.
    #[arg(long, global = true, value_enum)]
    pub mode: Option<ModeArg>,

    /// Relative tie tolerance in float mode.
    #[arg(long, global = true)]
    pub eps: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Rational,
    Float,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EndArg {
    #[value(name = "1")]
    Straight,
    #[value(name = "2")]
    Turn,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Index value of one chain, by both evaluators.
    Value {
        /// Comma-separated links, e.g. `1,2,2,1`; empty for the domino.
        #[arg(long, allow_hyphen_values = true)]
        links: String,
        #[arg(long)]
        json: bool,
    },
    /// Maximum over all chains with n squares.
    Max(Extremal),
    /// Minimum over all chains with n squares.
    Min(Extremal),
    /// Linear/zigzag sufficient-condition verdict.
    Classify {
        /// Classify the negated index, i.e. the minimization problem.
        #[arg(long)]
        minimize: bool,
    },
    /// Optima for a range of n.
    Table {
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Exact p/q values in csv and plain output.
        #[arg(long)]
        exact: bool,
    },
    /// Cross-checks the program against exhaustive search (and, for azi,
    /// the closed-form results).
    Verify {
        #[arg(long)]
        n_max: usize,
        /// Largest n for exhaustive search.
        #[arg(long, default_value_t = polychain::oracle::DEFAULT_CAP)]
        oracle_cap: usize,
        /// Include every checked claim, not only failures.
        #[arg(long)]
        verbose: bool,
        /// Adds the given rational to g22 before running (fault injection).
        #[arg(long, hide = true, allow_hyphen_values = true, value_name = "P/Q")]
        inject_g22: Option<String>,
    },
    /// The resolved index as a document, with its increment table.
    Show,
}

#[derive(Debug, Args)]
pub struct Extremal {
    #[arg(long)]
    pub n: usize,
    /// Restrict to chains whose last link is 1 or 2.
    #[arg(long, value_enum)]
    pub end: Option<EndArg>,
    /// List every optimal chain in lexicographic order.
    #[arg(long)]
    pub enumerate: bool,
    /// With --enumerate, one chain per mirror pair.
    #[arg(long, requires = "enumerate")]
    pub dedup: bool,
    /// With --enumerate, stop after this many chains.
    #[arg(long, requires = "enumerate")]
    pub limit: Option<usize>,
    /// Constant-memory mode: values and counts only, no witness.
    #[arg(long, conflicts_with_all = ["enumerate", "end"])]
    pub stream: bool,
}
