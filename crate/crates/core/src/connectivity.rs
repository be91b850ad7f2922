//! Types shared by the algebraic solvers and the max-flow oracle.

use std::time::Duration;

use thiserror::Error;

use crate::field::{FieldConfig, FieldError};
use crate::graph::GraphError;
use crate::linalg::LinalgError;

/// Whether a table holds exact connectivities or values capped at `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bound {
    Exact,
    AtMost(usize),
}

/// `n x n` table of `λ(s,t)` (or `min(k, λ(s,t))`). The diagonal is 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConnectivityMatrix {
    n: usize,
    values: Vec<usize>,
    bound: Bound,
}

impl ConnectivityMatrix {
    pub fn zeros(n: usize, bound: Bound) -> Self {
        ConnectivityMatrix {
            n,
            values: vec![0; n * n],
            bound,
        }
    }

    pub fn from_rows(rows: Vec<Vec<usize>>, bound: Bound) -> Self {
        let n = rows.len();
        assert!(
            rows.iter().all(|r| r.len() == n),
            "connectivity table must be square"
        );
        ConnectivityMatrix {
            n,
            values: rows.into_iter().flatten().collect(),
            bound,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bound(&self) -> Bound {
        self.bound
    }

    #[inline]
    pub fn get(&self, s: usize, t: usize) -> usize {
        self.values[s * self.n + t]
    }

    #[inline]
    pub fn set(&mut self, s: usize, t: usize, value: usize) {
        self.values[s * self.n + t] = value;
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.values
            .chunks(self.n.max(1))
            .take(self.n)
            .map(<[usize]>::to_vec)
            .collect()
    }

    pub fn max_value(&self) -> usize {
        self.values.iter().copied().max().unwrap_or(0)
    }

    /// Entrywise `min(k, ·)`, tagged as k-bounded.
    pub fn capped(&self, k: usize) -> ConnectivityMatrix {
        ConnectivityMatrix {
            n: self.n,
            values: self.values.iter().map(|&v| v.min(k)).collect(),
            bound: Bound::AtMost(k),
        }
    }

    /// Ordered pairs `(s, t)`, `s != t`, where the values differ.
    pub fn mismatches(&self, other: &ConnectivityMatrix) -> Vec<(usize, usize)> {
        assert_eq!(self.n, other.n, "tables of different size");
        let mut out = Vec::new();
        for s in 0..self.n {
            for t in 0..self.n {
                if s != t && self.get(s, t) != other.get(s, t) {
                    out.push((s, t));
                }
            }
        }
        out
    }

    pub fn same_values(&self, other: &ConnectivityMatrix) -> bool {
        self.n == other.n && self.values == other.values
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("input graph has parallel edges")]
    NotSimple,
    #[error("k must be at least 1")]
    ZeroBound,
    #[error("pair ({0}, {0}) has no defined connectivity")]
    DiagonalPair(usize),
    #[error("GF(2^{q}) is too small for {n} vertices (needs 2^q >= 12 n^6)")]
    FieldTooSmall { q: u32, n: usize },
    #[error("matrix to invert was singular on all {attempts} random draws")]
    RetriesExhausted { attempts: u32 },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// How the solvers pick GF(2^q).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FieldChoice {
    /// Narrowest supported width meeting `2^q >= 12 n^6`, per component.
    #[default]
    Auto,
    /// Use this field for every component even when it is below the bound.
    Fixed(FieldConfig),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    pub field: FieldChoice,
    /// Fresh draws allowed after a singular one.
    pub max_retries: u32,
    /// Form `CB` by dense multiplication instead of the structured formula.
    pub dense_cb: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            field: FieldChoice::Auto,
            max_retries: 3,
            dense_cb: false,
        }
    }
}

/// Wall time per solver phase, summed over components.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PhaseTimings {
    /// Gadget construction, random sampling, forming the matrix to invert.
    pub build: Duration,
    pub invert: Duration,
    /// Forming the decode matrix (k-APC only) and all per-pair ranks.
    pub ranks: Duration,
}

impl PhaseTimings {
    pub fn total(&self) -> Duration {
        self.build + self.invert + self.ranks
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub connectivity: ConnectivityMatrix,
    /// Width used for the largest component.
    pub q: u32,
    /// Singular draws that were thrown away, over all components.
    pub retries: u32,
    /// Some component ran in a field below the `12 n^6` bound.
    pub unsafe_field: bool,
    /// Largest matrix dimension inverted.
    pub invert_dim: usize,
    pub timings: PhaseTimings,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_accessors() {
        let mut c = ConnectivityMatrix::zeros(3, Bound::Exact);
        c.set(0, 2, 4);
        c.set(1, 0, 1);
        assert_eq!(c.rows(), vec![vec![0, 0, 4], vec![1, 0, 0], vec![0, 0, 0]]);
        assert_eq!(c.max_value(), 4);
        let capped = c.capped(2);
        assert_eq!(capped.get(0, 2), 2);
        assert_eq!(capped.bound(), Bound::AtMost(2));
        assert_eq!(c.mismatches(&capped), vec![(0, 2)]);
        assert_eq!(ConnectivityMatrix::from_rows(c.rows(), Bound::Exact), c);
        assert!(ConnectivityMatrix::zeros(0, Bound::Exact).rows().is_empty());
    }
}
