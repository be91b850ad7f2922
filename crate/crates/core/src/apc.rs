//! Exact all-pairs connectivity by inverting a random edge-adjacency matrix.
//!
//! Draw `A[e,f]` uniformly at random whenever `head(e) = tail(f)` (zero
//! otherwise), invert `I - A` once, and read `λ(s,t)` off as the rank of the
//! block `(I - A)^-1[E_out(s), E_in(t)]`. With `2^q >= 12 n^6` every pair is
//! correct simultaneously with probability at least `1 - 1/n`; a wrong
//! answer can only be too small, since the rank never exceeds `λ(s,t)`.

use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

use crate::connectivity::{
    Bound, ConnectivityMatrix, FieldChoice, PhaseTimings, SolveError, SolveOptions, SolveReport,
};
use crate::field::{field_for_instance, FieldConfig};
use crate::graph::{weak_components, Digraph, VertexId};
use crate::linalg::{FieldMatrix, LinalgError};

/// Random evaluation of the symbolic edge-adjacency matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomAdjacency {
    /// `m x m`; nonzero only on composable pairs.
    pub matrix: FieldMatrix,
}

/// Draws `A` for `g`. Fails if the field is below the `12 n^6` bound.
pub fn sample_adjacency<R: Rng + ?Sized>(
    g: &Digraph,
    field: FieldConfig,
    rng: &mut R,
) -> Result<RandomAdjacency, SolveError> {
    if !field.satisfies_bound(g.n()) {
        return Err(SolveError::FieldTooSmall {
            q: field.q(),
            n: g.n(),
        });
    }
    Ok(sample_adjacency_unchecked(g, field, rng))
}

/// One draw per composable pair, in `(e, f)` order with `e` outer.
pub(crate) fn sample_adjacency_unchecked<R: Rng + ?Sized>(
    g: &Digraph,
    field: FieldConfig,
    rng: &mut R,
) -> RandomAdjacency {
    let m = g.m();
    let mut a = FieldMatrix::zeros(field, m, m);
    for e in 0..m {
        for &f in g.successors(e) {
            a.set(e, f, field.random_element(rng));
        }
    }
    RandomAdjacency { matrix: a }
}

/// `λ(s,t)` for every ordered pair, with default options.
pub fn solve_apc<R: Rng + ?Sized>(
    g: &Digraph,
    rng: &mut R,
) -> Result<ConnectivityMatrix, SolveError> {
    solve_apc_with(g, &SolveOptions::default(), rng).map(|r| r.connectivity)
}

/// Solves each weakly connected component separately and reassembles;
/// cross-component pairs are 0.
pub fn solve_apc_with<R: Rng + ?Sized>(
    g: &Digraph,
    opts: &SolveOptions,
    rng: &mut R,
) -> Result<SolveReport, SolveError> {
    if !g.is_simple() {
        return Err(SolveError::NotSimple);
    }
    let mut report = SolveReport {
        connectivity: ConnectivityMatrix::zeros(g.n(), Bound::Exact),
        q: 0,
        retries: 0,
        unsafe_field: false,
        invert_dim: 0,
        timings: PhaseTimings::default(),
    };
    let mut largest = 0;
    for comp in weak_components(g) {
        let sub = solve_component(&comp.graph, opts, rng)?;
        if comp.graph.n() > largest {
            largest = comp.graph.n();
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

/// Single-pair variant: inverts `I - A` for the component of `s` and
/// returns one rank.
pub fn connectivity_pair<R: Rng + ?Sized>(
    g: &Digraph,
    s: VertexId,
    t: VertexId,
    rng: &mut R,
) -> Result<usize, SolveError> {
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    if s == t {
        return Err(SolveError::DiagonalPair(s));
    }
    if !g.is_simple() {
        return Err(SolveError::NotSimple);
    }
    let comps = weak_components(g);
    let comp = comps
        .iter()
        .find(|c| c.vertices.binary_search(&s).is_ok())
        .expect("every vertex lies in a component");
    let Ok(lt) = comp.vertices.binary_search(&t) else {
        return Ok(0);
    };
    let ls = comp.vertices.binary_search(&s).expect("found above");
    let h = &comp.graph;
    let field = pick_field(h.n(), &SolveOptions::default())?.0;
    let (inverse, _) = invert_with_retries(SolveOptions::default().max_retries, || {
        sample_adjacency_unchecked(h, field, rng)
            .matrix
            .identity_minus()
    })?;
    Ok(pair_rank(&inverse, h, ls, lt))
}

pub(crate) struct ComponentSolution {
    pub values: Vec<Vec<usize>>,
    pub field: FieldConfig,
    pub retries: u32,
    pub unsafe_field: bool,
    pub invert_dim: usize,
    pub timings: PhaseTimings,
}

pub(crate) fn pick_field(n: usize, opts: &SolveOptions) -> Result<(FieldConfig, bool), SolveError> {
    match opts.field {
        FieldChoice::Auto => Ok((field_for_instance(n)?, false)),
        FieldChoice::Fixed(f) => Ok((f, !f.satisfies_bound(n))),
    }
}

/// Calls `draw` until the matrix it produces is invertible, at most
/// `1 + max_retries` times. Returns the inverse and the number of singular
/// draws discarded.
pub(crate) fn invert_with_retries(
    max_retries: u32,
    mut draw: impl FnMut() -> Result<FieldMatrix, LinalgError>,
) -> Result<(FieldMatrix, u32), SolveError> {
    for attempt in 0..=max_retries {
        match draw()?.invert() {
            Ok(inv) => return Ok((inv, attempt)),
            Err(LinalgError::Singular) => continue,
            Err(other) => return Err(other.into()),
        }
    }
    Err(SolveError::RetriesExhausted {
        attempts: max_retries + 1,
    })
}

fn pair_rank(inverse: &FieldMatrix, g: &Digraph, s: VertexId, t: VertexId) -> usize {
    let (rows, cols) = (g.out_ids(s), g.in_ids(t));
    if rows.is_empty() || cols.is_empty() {
        return 0;
    }
    inverse
        .submatrix(rows, cols)
        .expect("edge ids index the inverse")
        .rank()
}

pub(crate) fn solve_component<R: Rng + ?Sized>(
    g: &Digraph,
    opts: &SolveOptions,
    rng: &mut R,
) -> Result<ComponentSolution, SolveError> {
    let n = g.n();
    let (field, unsafe_field) = pick_field(n, opts)?;
    let mut sol = ComponentSolution {
        values: vec![vec![0; n]; n],
        field,
        retries: 0,
        unsafe_field,
        invert_dim: 0,
        timings: PhaseTimings::default(),
    };
    if g.m() == 0 {
        return Ok(sol);
    }

    let mut build = std::time::Duration::ZERO;
    let mut invert = std::time::Duration::ZERO;
    let mut retries = 0;
    let inverse = loop {
        let t0 = Instant::now();
        let i_minus_a = sample_adjacency_unchecked(g, field, rng)
            .matrix
            .identity_minus()?;
        let t1 = Instant::now();
        let result = i_minus_a.invert();
        build += t1 - t0;
        invert += t1.elapsed();
        match result {
            Ok(inv) => break inv,
            Err(LinalgError::Singular) if retries < opts.max_retries => retries += 1,
            Err(LinalgError::Singular) => {
                return Err(SolveError::RetriesExhausted {
                    attempts: retries + 1,
                })
            }
            Err(other) => return Err(other.into()),
        }
    };
    sol.retries = retries;
    sol.invert_dim = g.m();
    sol.timings.build = build;
    sol.timings.invert = invert;

    let t0 = Instant::now();
    sol.values = (0..n)
        .into_par_iter()
        .map(|s| {
            (0..n)
                .map(|t| {
                    if s == t {
                        0
                    } else {
                        pair_rank(&inverse, g, s, t)
                    }
                })
                .collect()
        })
        .collect();
    sol.timings.ranks = t0.elapsed();
    Ok(sol)
}
