//! Wall-time comparison of the oracle and both solvers on random graphs.

use std::time::{Duration, Instant};

use edgeconn_core::graph::gen_random;
use edgeconn_core::{all_pairs_oracle, solve_apc_with, solve_kapc_with, SolveOptions};

use crate::{seeded_rng, CliError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub algo: &'static str,
    pub n: usize,
    pub m: usize,
    pub k: Option<usize>,
    pub q: Option<u32>,
    pub invert_dim: Option<usize>,
    pub build: Duration,
    pub invert: Duration,
    pub ranks: Duration,
    pub total: Duration,
}

pub const CSV_HEADER: &str = "algo,n,m,k,q,invert_dim,build_ms,invert_ms,ranks_ms,total_ms";

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn ms(d: Duration) -> String {
    format!("{:.3}", d.as_secs_f64() * 1e3)
}

impl BenchRow {
    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.algo,
            self.n,
            self.m,
            opt(self.k),
            opt(self.q),
            opt(self.invert_dim),
            ms(self.build),
            ms(self.invert),
            ms(self.ranks),
            ms(self.total)
        )
    }
}

/// Parses `n:m,n:m,...`.
pub fn parse_sizes(s: &str) -> Result<Vec<(usize, usize)>, CliError> {
    s.split(',')
        .map(|part| {
            let (n, m) = part
                .split_once(':')
                .ok_or_else(|| CliError::Usage(format!("size {part:?} is not n:m")))?;
            let n = n
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad n in {part:?}")))?;
            let m = m
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad m in {part:?}")))?;
            Ok((n, m))
        })
        .collect()
}

/// Parses a comma-separated list of positive integers.
pub fn parse_ks(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(|part| match part.trim().parse() {
            Ok(k) if k >= 1 => Ok(k),
            _ => Err(CliError::Usage(format!("bad k {part:?}"))),
        })
        .collect()
}

/// One graph per size, generated from `seed`; every solver run is seeded
/// with `seed` as well.
pub fn run_bench(
    sizes: &[(usize, usize)],
    ks: &[usize],
    seed: u64,
    with_oracle: bool,
) -> Result<Vec<BenchRow>, CliError> {
    let mut rows = Vec::new();
    let mut graph_rng = seeded_rng(seed);
    let opts = SolveOptions::default();
    for &(n, m) in sizes {
        let g =
            gen_random(n, m, false, &mut graph_rng).map_err(|e| CliError::Usage(e.to_string()))?;
        if with_oracle {
            let t0 = Instant::now();
            all_pairs_oracle(&g);
            let total = t0.elapsed();
            rows.push(BenchRow {
                algo: "oracle",
                n,
                m,
                k: None,
                q: None,
                invert_dim: None,
                build: Duration::ZERO,
                invert: Duration::ZERO,
                ranks: Duration::ZERO,
                total,
            });
        }
        let report = solve_apc_with(&g, &opts, &mut seeded_rng(seed))?;
        rows.push(row("apc", n, m, None, &report));
        for &k in ks {
            let report = solve_kapc_with(&g, k, &opts, &mut seeded_rng(seed))?;
            rows.push(row("kapc", n, m, Some(k), &report));
        }
    }
    Ok(rows)
}

fn row(
    algo: &'static str,
    n: usize,
    m: usize,
    k: Option<usize>,
    r: &edgeconn_core::SolveReport,
) -> BenchRow {
    BenchRow {
        algo,
        n,
        m,
        k,
        q: Some(r.q),
        invert_dim: Some(r.invert_dim),
        build: r.timings.build,
        invert: r.timings.invert,
        ranks: r.timings.ranks,
        total: r.timings.total(),
    }
}
