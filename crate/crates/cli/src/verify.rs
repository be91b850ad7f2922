//! Empirical failure rate of the randomized solvers against the oracle.

use edgeconn_core::{
    all_pairs_oracle, solve_apc_with, solve_kapc_with, ConnectivityMatrix, Digraph, SolveError,
    SolveOptions,
};
use serde::Serialize;

use crate::seeded_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SeedOutcome {
    pub seed: u64,
    /// Graphs whose table had at least one wrong entry.
    pub failed_runs: usize,
    pub mismatched_pairs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub graphs: usize,
    pub seeds: usize,
    pub k: Option<usize>,
    pub runs: usize,
    pub failed_runs: usize,
    pub failure_rate: f64,
    pub per_seed: Vec<SeedOutcome>,
}

/// Solves every graph once per seed. Seed `first_seed + i` drives one
/// generator shared by all graphs in order.
pub fn verify_graphs(
    graphs: &[Digraph],
    k: Option<usize>,
    seeds: u64,
    first_seed: u64,
    opts: &SolveOptions,
) -> Result<VerifyReport, SolveError> {
    let truth: Vec<ConnectivityMatrix> = graphs
        .iter()
        .map(|g| {
            let exact = all_pairs_oracle(g);
            match k {
                Some(k) => exact.capped(k),
                None => exact,
            }
        })
        .collect();
    let mut per_seed = Vec::with_capacity(seeds as usize);
    for seed in first_seed..first_seed + seeds {
        let mut rng = seeded_rng(seed);
        let mut outcome = SeedOutcome {
            seed,
            failed_runs: 0,
            mismatched_pairs: 0,
        };
        for (g, want) in graphs.iter().zip(&truth) {
            let got = match k {
                Some(k) => solve_kapc_with(g, k, opts, &mut rng)?,
                None => solve_apc_with(g, opts, &mut rng)?,
            };
            let wrong = got.connectivity.mismatches(want).len();
            outcome.mismatched_pairs += wrong;
            outcome.failed_runs += usize::from(wrong > 0);
        }
        per_seed.push(outcome);
    }
    let runs = graphs.len() * per_seed.len();
    let failed_runs = per_seed.iter().map(|s| s.failed_runs).sum();
    Ok(VerifyReport {
        graphs: graphs.len(),
        seeds: per_seed.len(),
        k,
        runs,
        failed_runs,
        failure_rate: if runs == 0 {
            0.0
        } else {
            failed_runs as f64 / runs as f64
        },
        per_seed,
    })
}
