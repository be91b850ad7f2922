//! Library side of the `edgeconn` command: argument types, report
//! formatting, the verify and bench drivers.

pub mod args;
pub mod bench;
pub mod commands;
pub mod output;
pub mod verify;

use std::fs::File;
use std::io::{self, BufReader};
use std::path::Path;

use edgeconn_core::graph::read_edge_list;
use edgeconn_core::{Digraph, ParseError, SolveError};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use args::Cli;
pub use commands::run;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Input { path: String, source: ParseError },
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("{0}")]
    ChecksFailed(String),
}

impl CliError {
    /// 2 for bad input or usage, 3 when every random draw was singular.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Input { .. } | CliError::Io(_) => 2,
            CliError::Solve(SolveError::RetriesExhausted { .. }) => 3,
            CliError::Solve(_) | CliError::ChecksFailed(_) => 1,
        }
    }
}

/// Reads an edge-list file; `-` reads standard input.
pub fn load_graph(path: &Path) -> Result<Digraph, CliError> {
    let shown = path.display().to_string();
    let parsed = if shown == "-" {
        read_edge_list(io::stdin().lock())
    } else {
        let file = File::open(path).map_err(|e| CliError::Input {
            path: shown.clone(),
            source: e.into(),
        })?;
        read_edge_list(BufReader::new(file))
    };
    parsed.map_err(|source| CliError::Input {
        path: shown,
        source,
    })
}

/// The generator every randomized command draws from.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
