//! JSON and TSV renderings of solver results.

use std::fmt::Write as _;

use edgeconn_core::{ConnectivityMatrix, Digraph, SolveReport};
use serde::Serialize;

use crate::args::Format;

/// The documented solve schema. `k` is null for exact runs; `unsafe` only
/// appears when the field was below the size bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveOutput {
    pub n: usize,
    pub m: usize,
    pub k: Option<usize>,
    pub q: u32,
    pub seed: u64,
    pub retries: u32,
    #[serde(rename = "unsafe", skip_serializing_if = "std::ops::Not::not")]
    pub unsafe_field: bool,
    pub connectivity: Vec<Vec<usize>>,
}

impl SolveOutput {
    pub fn new(g: &Digraph, k: Option<usize>, seed: u64, report: &SolveReport) -> Self {
        SolveOutput {
            n: g.n(),
            m: g.m(),
            k,
            q: report.q,
            seed,
            retries: report.retries,
            unsafe_field: report.unsafe_field,
            connectivity: report.connectivity.rows(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleOutput {
    pub n: usize,
    pub m: usize,
    pub connectivity: Vec<Vec<usize>>,
}

/// One line of JSON, or `n` lines of tab-separated values.
pub fn render<T: Serialize>(value: &T, table: &ConnectivityMatrix, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string(value).expect("plain data serializes");
            s.push('\n');
            s
        }
        Format::Tsv => tsv(table),
    }
}

pub fn tsv(table: &ConnectivityMatrix) -> String {
    let mut s = String::new();
    for row in table.rows() {
        let cells: Vec<String> = row.iter().map(usize::to_string).collect();
        writeln!(s, "{}", cells.join("\t")).expect("writing to a String");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use edgeconn_core::{Bound, PhaseTimings};

    fn report(unsafe_field: bool) -> SolveReport {
        SolveReport {
            connectivity: ConnectivityMatrix::from_rows(vec![vec![0, 1], vec![0, 0]], Bound::Exact),
            q: 16,
            retries: 0,
            unsafe_field,
            invert_dim: 1,
            timings: PhaseTimings::default(),
        }
    }

    #[test]
    fn json_schema_order() {
        let g = Digraph::new(2, vec![(0, 1)]).unwrap();
        let r = report(false);
        let out = render(
            &SolveOutput::new(&g, None, 7, &r),
            &r.connectivity,
            Format::Json,
        );
        assert_eq!(out, "{\"n\":2,\"m\":1,\"k\":null,\"q\":16,\"seed\":7,\"retries\":0,\"connectivity\":[[0,1],[0,0]]}\n");
        let r = report(true);
        let out = render(
            &SolveOutput::new(&g, Some(2), 7, &r),
            &r.connectivity,
            Format::Json,
        );
        assert!(out.contains("\"k\":2") && out.contains("\"unsafe\":true"));
    }

    #[test]
    fn tsv_shape() {
        let r = report(false);
        assert_eq!(tsv(&r.connectivity), "0\t1\n0\t0\n");
    }
}
