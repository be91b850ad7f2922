//! k-bounded all-pairs connectivity through a degree-reduction gadget and a
//! low-rank edge-adjacency matrix.
//!
//! Every vertex `v` gains two neighbours `v_in` and `v_out`; an original
//! edge `(u, v)` becomes `(u_out, v_in)`, and `k` parallel edges run
//! `v -> v_out` and `v_in -> v`. This caps every original vertex's degree at
//! `k` while keeping `min(k, λ(s,t))`. The random adjacency matrix of the
//! gadget then factors as `BC` with `B` of shape `m_new x k n_new`, so
//! `(I - BC)^-1 = I + B (I - CB)^-1 C` only needs a `k n_new`-dimensional
//! inversion.

use std::ops::Range;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

use crate::apc::{self, pick_field};
use crate::connectivity::{
    Bound, ConnectivityMatrix, PhaseTimings, SolveError, SolveOptions, SolveReport,
};
use crate::field::{FieldConfig, FieldElement};
use crate::graph::{weak_components, Digraph, EdgeId, VertexId};
use crate::linalg::{FieldMatrix, LinalgError};

/// The degree-reduction gadget `G_new` built from `base`.
///
/// Vertex ids: original `v` stays `v`, `v_in = n + v`, `v_out = 2n + v`.
/// Edge ids: original edge `e` keeps id `e` as `(u_out, v_in)`; then for
/// each `v` in order, `k` edges `v -> v_out` followed by `k` edges
/// `v_in -> v`. The `i`-th parallel edge is the `i`-th inserted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetGraph {
    pub base: Digraph,
    pub graph: Digraph,
    pub k: usize,
}

impl GadgetGraph {
    /// Original vertex count.
    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn n_new(&self) -> usize {
        self.graph.n()
    }

    pub fn m_new(&self) -> usize {
        self.graph.m()
    }

    pub fn in_node(&self, v: VertexId) -> VertexId {
        self.n() + v
    }

    pub fn out_node(&self, v: VertexId) -> VertexId {
        2 * self.n() + v
    }

    /// Whether a gadget vertex is one of the original vertices.
    pub fn is_original(&self, v: VertexId) -> bool {
        v < self.n()
    }

    /// Id in `G_new` of the edge replacing original edge `e`.
    pub fn replacement_edge(&self, e: EdgeId) -> EdgeId {
        e
    }

    /// The `k` parallel edges `v -> v_out`: all of `E_out(v)` in `G_new`.
    pub fn out_gadget_edges(&self, v: VertexId) -> Range<EdgeId> {
        let start = self.base.m() + 2 * self.k * v;
        start..start + self.k
    }

    /// The `k` parallel edges `v_in -> v`: all of `E_in(v)` in `G_new`.
    pub fn in_gadget_edges(&self, v: VertexId) -> Range<EdgeId> {
        let start = self.base.m() + 2 * self.k * v + self.k;
        start..start + self.k
    }

    /// Column index of `(v, j)` in the `k n_new` factor dimension.
    pub fn slot(&self, v: VertexId, j: usize) -> usize {
        v * self.k + j
    }
}

pub fn build_gadget(g: &Digraph, k: usize) -> Result<GadgetGraph, SolveError> {
    if k == 0 {
        return Err(SolveError::ZeroBound);
    }
    let n = g.n();
    let mut edges = Vec::with_capacity(g.m() + 2 * k * n);
    edges.extend(g.edges().iter().map(|&(u, v)| (2 * n + u, n + v)));
    for v in 0..n {
        edges.extend(std::iter::repeat_n((v, 2 * n + v), k));
        edges.extend(std::iter::repeat_n((n + v, v), k));
    }
    let graph = Digraph::new(3 * n, edges).expect("gadget edges are in range and loop-free");
    Ok(GadgetGraph {
        base: g.clone(),
        graph,
        k,
    })
}

/// Random evaluations of the factors `Y` and `Z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowRankFactors {
    /// `m_new x k n_new`; `B[e, (v,j)] = b_ej` when `head(e) = v`.
    pub b: FieldMatrix,
    /// `k n_new x m_new`; `C[(v,j), f] = c_jf` when `tail(f) = v`.
    pub c: FieldMatrix,
}

impl LowRankFactors {
    /// Rows of `B` for edges leaving original vertices, grouped by vertex.
    pub fn b_tilde(&self, gg: &GadgetGraph) -> FieldMatrix {
        let rows: Vec<EdgeId> = (0..gg.n()).flat_map(|v| gg.out_gadget_edges(v)).collect();
        let cols: Vec<usize> = (0..self.b.cols()).collect();
        self.b
            .submatrix(&rows, &cols)
            .expect("gadget edge ids index B")
    }

    /// Columns of `C` for edges entering original vertices, grouped by vertex.
    pub fn c_tilde(&self, gg: &GadgetGraph) -> FieldMatrix {
        let rows: Vec<usize> = (0..self.c.rows()).collect();
        let cols: Vec<EdgeId> = (0..gg.n()).flat_map(|v| gg.in_gadget_edges(v)).collect();
        self.c
            .submatrix(&rows, &cols)
            .expect("gadget edge ids index C")
    }

    pub fn field(&self) -> FieldConfig {
        self.b.field()
    }
}

/// Draws `B` then `C`. The field must meet the bound for the original `n`.
pub fn sample_factors<R: Rng + ?Sized>(
    gg: &GadgetGraph,
    field: FieldConfig,
    rng: &mut R,
) -> Result<LowRankFactors, SolveError> {
    if !field.satisfies_bound(gg.n()) {
        return Err(SolveError::FieldTooSmall {
            q: field.q(),
            n: gg.n(),
        });
    }
    Ok(sample_factors_unchecked(gg, field, rng))
}

fn sample_factors_unchecked<R: Rng + ?Sized>(
    gg: &GadgetGraph,
    field: FieldConfig,
    rng: &mut R,
) -> LowRankFactors {
    let (k, m_new, dim) = (gg.k, gg.m_new(), gg.k * gg.n_new());
    let g = &gg.graph;
    let mut b = FieldMatrix::zeros(field, m_new, dim);
    for e in 0..m_new {
        let v = g.head(e);
        for j in 0..k {
            b.set(e, gg.slot(v, j), field.random_element(rng));
        }
    }
    let mut c = FieldMatrix::zeros(field, dim, m_new);
    for f in 0..m_new {
        let v = g.tail(f);
        for j in 0..k {
            c.set(gg.slot(v, j), f, field.random_element(rng));
        }
    }
    LowRankFactors { b, c }
}

/// `CB` from its entry formula
/// `CB[(u,i),(v,j)] = sum over e in E_out(u) ∩ E_in(v) of c_ie b_ej`.
///
/// Only three kinds of blocks can be nonzero: `(v_in, v)` through the `k`
/// parallel in-edges of an original `v`, `(u, u_out)` through the `k`
/// parallel out-edges of an original `u`, and `(u_out, v_in)` through the
/// single edge replacing `(u, v)`.
pub fn structured_cb(gg: &GadgetGraph, factors: &LowRankFactors) -> FieldMatrix {
    let f = factors.field();
    let k = gg.k;
    let dim = k * gg.n_new();
    let (b, c) = (&factors.b, &factors.c);
    let mut cb = FieldMatrix::zeros(f, dim, dim);

    let mut accumulate = |u: VertexId, v: VertexId, edges: &mut dyn Iterator<Item = EdgeId>| {
        let edges: Vec<EdgeId> = edges.collect();
        for i in 0..k {
            for j in 0..k {
                let mut acc = cb.get(gg.slot(u, i), gg.slot(v, j));
                for &e in &edges {
                    acc += f.mul(c.get(gg.slot(u, i), e), b.get(e, gg.slot(v, j)));
                }
                cb.set(gg.slot(u, i), gg.slot(v, j), acc);
            }
        }
    };

    for v in 0..gg.n() {
        accumulate(gg.in_node(v), v, &mut gg.in_gadget_edges(v));
        accumulate(v, gg.out_node(v), &mut gg.out_gadget_edges(v));
    }
    for (e, &(u, v)) in gg.base.edges().iter().enumerate() {
        let id = gg.replacement_edge(e);
        accumulate(gg.out_node(u), gg.in_node(v), &mut std::iter::once(id));
    }
    cb
}

/// `CB` by dense multiplication; cross-check for [`structured_cb`].
pub fn dense_cb(factors: &LowRankFactors) -> FieldMatrix {
    factors
        .c
        .matmul(&factors.b)
        .expect("C is k n_new x m_new and B is m_new x k n_new")
}

/// `M = B~ (I - CB)^-1 C~` as a `kn x kn` matrix, rows `(s, a)` for the
/// `a`-th edge of `E_out(s)` and columns `(t, b)` for the `b`-th edge of
/// `E_in(t)`. Uses that row `(s, a)` of `B~` is supported on the `k`
/// columns of `s_out` and column `(t, b)` of `C~` on the `k` rows of `t_in`.
pub fn decode_matrix(
    gg: &GadgetGraph,
    factors: &LowRankFactors,
    inverse: &FieldMatrix,
) -> FieldMatrix {
    let f = factors.field();
    let (n, k) = (gg.n(), gg.k);
    let dim = n * k;
    // left[(s,a), (t,j)] = sum_i B[(s,a), (s_out,i)] * inv[(s_out,i), (t_in,j)]
    let left_rows: Vec<Vec<FieldElement>> = (0..dim)
        .into_par_iter()
        .map(|row| {
            let (s, a) = (row / k, row % k);
            let e = gg.out_gadget_edges(s).start + a;
            let mut out = vec![FieldElement::ZERO; dim];
            for i in 0..k {
                let coeff = factors.b.get(e, gg.slot(gg.out_node(s), i));
                if coeff.is_zero() {
                    continue;
                }
                let inv_row = inverse.row(gg.slot(gg.out_node(s), i));
                for t in 0..n {
                    for j in 0..k {
                        out[t * k + j] += f.mul(coeff, inv_row[gg.slot(gg.in_node(t), j)]);
                    }
                }
            }
            out
        })
        .collect();
    // M[(s,a), (t,b)] = sum_j left[(s,a), (t,j)] * C[(t_in,j), (t,b)]
    let mut m = FieldMatrix::zeros(f, dim, dim);
    for (row, left) in left_rows.iter().enumerate() {
        for t in 0..n {
            let fin = gg.in_gadget_edges(t).start;
            for bcol in 0..k {
                let mut acc = FieldElement::ZERO;
                for j in 0..k {
                    acc += f.mul(
                        left[t * k + j],
                        factors.c.get(gg.slot(gg.in_node(t), j), fin + bcol),
                    );
                }
                m.set(row, t * k + bcol, acc);
            }
        }
    }
    m
}

/// Checks `(I - BC)^-1 = I + B (I - CB)^-1 C` exactly. `Err(Singular)` when
/// either side does not exist for this draw.
pub fn verify_woodbury_identity(factors: &LowRankFactors) -> Result<bool, LinalgError> {
    let bc = factors.b.matmul(&factors.c)?;
    let lhs = bc.identity_minus()?.invert()?;
    let inner = dense_cb(factors).identity_minus()?.invert()?;
    let rhs = FieldMatrix::identity(factors.field(), factors.b.rows())
        .add(&factors.b.matmul(&inner)?.matmul(&factors.c)?)?;
    Ok(lhs == rhs)
}

/// `min(k, λ(s,t))` for every ordered pair, with default options.
pub fn solve_kapc<R: Rng + ?Sized>(
    g: &Digraph,
    k: usize,
    rng: &mut R,
) -> Result<ConnectivityMatrix, SolveError> {
    solve_kapc_with(g, k, &SolveOptions::default(), rng).map(|r| r.connectivity)
}

/// Per weakly connected component: components with at most `k` vertices
/// are solved exactly by the APC path (their connectivities are below `k`
/// anyway); larger ones go through the gadget.
pub fn solve_kapc_with<R: Rng + ?Sized>(
    g: &Digraph,
    k: usize,
    opts: &SolveOptions,
    rng: &mut R,
) -> Result<SolveReport, SolveError> {
    if k == 0 {
        return Err(SolveError::ZeroBound);
    }
    if !g.is_simple() {
        return Err(SolveError::NotSimple);
    }
    let mut report = SolveReport {
        connectivity: ConnectivityMatrix::zeros(g.n(), Bound::AtMost(k)),
        q: 0,
        retries: 0,
        unsafe_field: false,
        invert_dim: 0,
        timings: PhaseTimings::default(),
    };
    let mut largest = 0;
    for comp in weak_components(g) {
        let h = &comp.graph;
        let sub = if k >= h.n() {
            apc::solve_component(h, opts, rng)?
        } else {
            solve_component(h, k, opts, rng)?
        };
        if h.n() > largest {
            largest = h.n();
            report.q = sub.field.q();
        }
        report.retries += sub.retries;
        report.unsafe_field |= sub.unsafe_field;
        report.invert_dim = report.invert_dim.max(sub.invert_dim);
        report.timings.build += sub.timings.build;
        report.timings.invert += sub.timings.invert;
        report.timings.ranks += sub.timings.ranks;
        for (ls, row) in sub.values.iter().enumerate() {
            for (lt, &v) in row.iter().enumerate() {
                report
                    .connectivity
                    .set(comp.vertices[ls], comp.vertices[lt], v);
            }
        }
    }
    Ok(report)
}

fn solve_component<R: Rng + ?Sized>(
    g: &Digraph,
    k: usize,
    opts: &SolveOptions,
    rng: &mut R,
) -> Result<apc::ComponentSolution, SolveError> {
    let n = g.n();
    let (field, unsafe_field) = pick_field(n, opts)?;

    let t0 = Instant::now();
    let gg = build_gadget(g, k)?;
    // the identity term of I + B (I - CB)^-1 C is dropped below
    debug_assert!((0..n).all(|s| (0..n).all(|t| {
        let outs = gg.out_gadget_edges(s);
        gg.in_gadget_edges(t).all(|e| !outs.contains(&e))
    })));
    let mut build = t0.elapsed();
    let mut invert = std::time::Duration::ZERO;
    let mut retries = 0;
    let (factors, inverse) = loop {
        let t0 = Instant::now();
        let factors = sample_factors_unchecked(&gg, field, rng);
        let cb = if opts.dense_cb {
            dense_cb(&factors)
        } else {
            structured_cb(&gg, &factors)
        };
        let i_minus_cb = cb.identity_minus()?;
        let t1 = Instant::now();
        let result = i_minus_cb.invert();
        build += t1 - t0;
        invert += t1.elapsed();
        match result {
            Ok(inv) => break (factors, inv),
            Err(LinalgError::Singular) if retries < opts.max_retries => retries += 1,
            Err(LinalgError::Singular) => {
                return Err(SolveError::RetriesExhausted {
                    attempts: retries + 1,
                })
            }
            Err(other) => return Err(other.into()),
        }
    };

    let t0 = Instant::now();
    let m = decode_matrix(&gg, &factors, &inverse);
    let values: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|s| {
            let rows: Vec<usize> = (s * k..(s + 1) * k).collect();
            (0..n)
                .map(|t| {
                    if s == t {
                        return 0;
                    }
                    let cols: Vec<usize> = (t * k..(t + 1) * k).collect();
                    m.submatrix(&rows, &cols).expect("block in range").rank()
                })
                .collect()
        })
        .collect();
    let ranks = t0.elapsed();

    Ok(apc::ComponentSolution {
        values,
        field,
        retries,
        unsafe_field,
        invert_dim: k * gg.n_new(),
        timings: PhaseTimings {
            build,
            invert,
            ranks,
        },
    })
}
