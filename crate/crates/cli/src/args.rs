use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "edgeconn",
    version,
    about = "All-pairs edge connectivity in directed graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact connectivity for every ordered pair
    Apc(SolveArgs),
    /// Connectivity capped at k for every ordered pair
    Kapc {
        #[command(flatten)]
        solve: SolveArgs,
        #[arg(long, value_parser = positive)]
        k: usize,
        /// Form the small matrix by dense multiplication
        #[arg(long)]
        dense_cb: bool,
    },
    /// Ground truth from one max flow per pair
    Oracle {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Compare a solver against the oracle over several seeds
    Verify(VerifyArgs),
    /// Write a random simple digraph as an edge list
    Gen {
        n: usize,
        m: usize,
        #[arg(long)]
        acyclic: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Defaults to standard output
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Time oracle, apc and kapc on random graphs; prints CSV
    Bench {
        /// Comma-separated n:m pairs
        #[arg(long, default_value = "20:100,40:300,60:600")]
        sizes: String,
        /// Comma-separated bounds for kapc
        #[arg(long, default_value = "1,2")]
        k: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Skip the max-flow oracle rows
        #[arg(long)]
        no_oracle: bool,
    },
    /// Check the walk-enumeration identities on small graphs
    SeriesCheck(SeriesArgs),
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Edge-list file, or - for standard input
    pub input: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Field width to use instead of the automatic choice; runs below the
    /// size bound are marked unsafe
    #[arg(long, value_parser = ["16", "32", "64"])]
    pub q_override: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Fresh draws allowed after a singular matrix
    #[arg(long, default_value_t = 3)]
    pub max_retries: u32,
    /// Print phase timings to standard error
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Edge-list file; omit when using --random
    #[arg(required_unless_present = "random", conflicts_with = "random")]
    pub input: Option<PathBuf>,
    /// Random graphs as N M COUNT
    #[arg(long, num_args = 3, value_names = ["N", "M", "COUNT"])]
    pub random: Option<Vec<usize>>,
    /// Check kapc with this bound instead of apc
    #[arg(long, value_parser = positive)]
    pub k: Option<usize>,
    /// Solver seeds per graph
    #[arg(long, default_value_t = 4)]
    pub seeds: u64,
    /// First solver seed; graph generation uses it too
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_parser = ["16", "32", "64"])]
    pub q_override: Option<String>,
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    #[arg(long, default_value_t = 3)]
    pub exhaustive_n: usize,
    #[arg(long, default_value_t = 100)]
    pub random: usize,
    #[arg(long, default_value_t = 6)]
    pub max_degree: usize,
    #[arg(long, default_value_t = 0x5e71e5)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(k) => Ok(k),
        Err(e) => Err(e.to_string()),
    }
}
