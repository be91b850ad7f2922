//! Truncated power series over GF(2) for checking the walk-enumeration
//! identities behind the solvers.
//!
//! The symbolic edge-adjacency matrix `X` has the indeterminate `x_ef` at
//! `(e, f)` whenever `head(e) = tail(f)`. Entries of `(I - X)^-1` enumerate
//! walks. On acyclic graphs its `r x r` minors enumerate collections of `r`
//! edge-disjoint walks. With a directed cycle that fails: on the 2-cycle,
//! three overlapping collections share the weight `x01 x10` and do not
//! cancel. Everything here is exact and meant for small graphs.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use itertools::Itertools;
use thiserror::Error;

use crate::graph::{Digraph, EdgeId, EdgeSet};

/// Largest minor expanded by [`det_submatrix`].
pub const MAX_MINOR: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("row set has {rows} edges but column set has {cols}")]
    SizeMismatch { rows: usize, cols: usize },
    #[error("{r} x {r} minors are too large to expand (limit {MAX_MINOR})")]
    MinorTooLarge { r: usize },
    #[error("edge {edge} out of range")]
    BadEdge { edge: EdgeId },
    #[error("edges {0} and {1} do not form a walk")]
    NotAWalk(EdgeId, EdgeId),
    #[error("walks share edge {0}")]
    NotDisjoint(EdgeId),
    #[error("matrix has a nonzero constant term off the identity")]
    ConstantTerm,
}

/// Indeterminate `x_ef`.
pub type Variable = (EdgeId, EdgeId);

/// Product of indeterminates, kept as a sorted multiset.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<Variable>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(e: EdgeId, f: EdgeId) -> Self {
        Monomial(vec![(e, f)])
    }

    pub fn from_vars(vars: impl IntoIterator<Item = Variable>) -> Self {
        let mut v: Vec<Variable> = vars.into_iter().collect();
        v.sort_unstable();
        Monomial(v)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn vars(&self) -> &[Variable] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            if self.0[i] <= other.0[j] {
                out.push(self.0[i]);
                i += 1;
            } else {
                out.push(other.0[j]);
                j += 1;
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }
}

/// Polynomial with GF(2) coefficients, dropping every term above degree `D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedPoly {
    terms: BTreeSet<Monomial>,
    degree_bound: usize,
}

impl TruncatedPoly {
    pub fn zero(degree_bound: usize) -> Self {
        TruncatedPoly {
            terms: BTreeSet::new(),
            degree_bound,
        }
    }

    pub fn one(degree_bound: usize) -> Self {
        TruncatedPoly::from_monomial(Monomial::one(), degree_bound)
    }

    pub fn from_monomial(m: Monomial, degree_bound: usize) -> Self {
        let mut p = TruncatedPoly::zero(degree_bound);
        p.toggle(m);
        p
    }

    /// Sum of `terms` mod 2, truncated.
    pub fn from_terms(terms: impl IntoIterator<Item = Monomial>, degree_bound: usize) -> Self {
        let mut p = TruncatedPoly::zero(degree_bound);
        for m in terms {
            p.toggle(m);
        }
        p
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeSet<Monomial> {
        &self.terms
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.terms.contains(m)
    }

    /// Adds `m` with coefficient 1; terms above the bound are ignored.
    pub fn toggle(&mut self, m: Monomial) {
        if m.degree() <= self.degree_bound && !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn add(&self, other: &TruncatedPoly) -> TruncatedPoly {
        let mut out = self.truncate(self.degree_bound.min(other.degree_bound));
        for m in &other.terms {
            out.toggle(m.clone());
        }
        out
    }

    pub fn mul(&self, other: &TruncatedPoly) -> TruncatedPoly {
        let bound = self.degree_bound.min(other.degree_bound);
        let mut out = TruncatedPoly::zero(bound);
        for a in &self.terms {
            for b in &other.terms {
                if a.degree() + b.degree() <= bound {
                    out.toggle(a.mul(b));
                }
            }
        }
        out
    }

    /// Same polynomial with bound `d`; raising the bound adds no terms.
    pub fn truncate(&self, d: usize) -> TruncatedPoly {
        TruncatedPoly {
            terms: self
                .terms
                .iter()
                .filter(|m| m.degree() <= d)
                .cloned()
                .collect(),
            degree_bound: d,
        }
    }

    /// Terms of exactly degree `d`.
    pub fn homogeneous(&self, d: usize) -> impl Iterator<Item = &Monomial> {
        self.terms.iter().filter(move |m| m.degree() == d)
    }
}

/// Square matrix of truncated polynomials indexed by edge ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeriesMatrix {
    dim: usize,
    degree_bound: usize,
    entries: Vec<TruncatedPoly>,
}

impl TruncatedSeriesMatrix {
    pub fn zeros(dim: usize, degree_bound: usize) -> Self {
        TruncatedSeriesMatrix {
            dim,
            degree_bound,
            entries: vec![TruncatedPoly::zero(degree_bound); dim * dim],
        }
    }

    pub fn identity(dim: usize, degree_bound: usize) -> Self {
        let mut out = TruncatedSeriesMatrix::zeros(dim, degree_bound);
        for i in 0..dim {
            out.entries[i * dim + i] = TruncatedPoly::one(degree_bound);
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn get(&self, e: EdgeId, f: EdgeId) -> &TruncatedPoly {
        &self.entries[e * self.dim + f]
    }

    pub fn set(&mut self, e: EdgeId, f: EdgeId, p: TruncatedPoly) {
        self.entries[e * self.dim + f] = p.truncate(self.degree_bound);
    }

    /// Entries under bound `d`; raising the bound adds no terms.
    pub fn truncate(&self, d: usize) -> TruncatedSeriesMatrix {
        TruncatedSeriesMatrix {
            dim: self.dim,
            degree_bound: d,
            entries: self.entries.iter().map(|p| p.truncate(d)).collect(),
        }
    }

    pub fn add(&self, other: &TruncatedSeriesMatrix) -> TruncatedSeriesMatrix {
        assert_eq!(self.dim, other.dim, "series matrices of different size");
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect();
        TruncatedSeriesMatrix {
            dim: self.dim,
            degree_bound: self.degree_bound.min(other.degree_bound),
            entries,
        }
    }

    pub fn mul(&self, other: &TruncatedSeriesMatrix) -> TruncatedSeriesMatrix {
        assert_eq!(self.dim, other.dim, "series matrices of different size");
        let n = self.dim;
        let bound = self.degree_bound.min(other.degree_bound);
        let mut out = TruncatedSeriesMatrix::zeros(n, bound);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cell = &mut out.entries[i * n + j];
                        *cell = cell.add(&a.mul(b));
                    }
                }
            }
        }
        out
    }

    /// `I - X`, which is `I + X` over GF(2).
    pub fn identity_minus(&self) -> TruncatedSeriesMatrix {
        TruncatedSeriesMatrix::identity(self.dim, self.degree_bound).add(self)
    }

    pub fn is_identity(&self) -> bool {
        *self == TruncatedSeriesMatrix::identity(self.dim, self.degree_bound)
    }
}

/// The symbolic matrix `X` of `g` with degree bound 1.
pub fn symbolic_x(g: &Digraph) -> TruncatedSeriesMatrix {
    let mut x = TruncatedSeriesMatrix::zeros(g.m(), 1);
    for e in 0..g.m() {
        for &f in g.successors(e) {
            x.set(e, f, TruncatedPoly::from_monomial(Monomial::var(e, f), 1));
        }
    }
    x
}

/// `I + X + ... + X^D` with every product truncated at degree `D`, which is
/// the degree-`D` prefix of `(I - X)^-1`.
pub fn truncated_gamma(
    x: &TruncatedSeriesMatrix,
    d: usize,
) -> Result<TruncatedSeriesMatrix, SeriesError> {
    if x.entries.iter().any(|p| p.contains(&Monomial::one())) {
        return Err(SeriesError::ConstantTerm);
    }
    let x = x.truncate(d);
    let identity = TruncatedSeriesMatrix::identity(x.dim, d);
    let mut gamma = identity.clone();
    for _ in 0..d {
        gamma = identity.add(&x.mul(&gamma));
    }
    Ok(gamma)
}

/// Determinant of `gamma[rows, cols]` by permutation expansion. Signs vanish
/// in characteristic two.
pub fn det_submatrix(
    gamma: &TruncatedSeriesMatrix,
    rows: &EdgeSet,
    cols: &EdgeSet,
) -> Result<TruncatedPoly, SeriesError> {
    let r = rows.len();
    if cols.len() != r {
        return Err(SeriesError::SizeMismatch {
            rows: r,
            cols: cols.len(),
        });
    }
    if r > MAX_MINOR {
        return Err(SeriesError::MinorTooLarge { r });
    }
    if let Some(edge) = rows.iter().chain(cols.iter()).find(|&e| e >= gamma.dim) {
        return Err(SeriesError::BadEdge { edge });
    }
    let (rows, cols) = (rows.ids(), cols.ids());
    let d = gamma.degree_bound;
    let mut det = TruncatedPoly::zero(d);
    for perm in (0..r).permutations(r) {
        let mut term = TruncatedPoly::one(d);
        for (i, &j) in perm.iter().enumerate() {
            term = term.mul(gamma.get(rows[i], cols[j]));
            if term.is_zero() {
                break;
            }
        }
        det = det.add(&term);
    }
    Ok(det)
}

/// Sequence of edges with `head(e_j) = tail(e_{j+1})`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Walk(Vec<EdgeId>);

impl Walk {
    pub fn new(g: &Digraph, edges: Vec<EdgeId>) -> Result<Self, SeriesError> {
        if let Some(&edge) = edges.iter().find(|&&e| e >= g.m()) {
            return Err(SeriesError::BadEdge { edge });
        }
        if let Some(w) = edges.windows(2).find(|w| !g.composable(w[0], w[1])) {
            return Err(SeriesError::NotAWalk(w[0], w[1]));
        }
        Ok(Walk(edges))
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<EdgeId> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<EdgeId> {
        self.0.last().copied()
    }

    /// `ξ(W)`: one indeterminate per consecutive pair.
    pub fn weight(&self) -> Monomial {
        Monomial::from_vars(self.0.windows(2).map(|w| (w[0], w[1])))
    }

    /// No two edges enter the same vertex, except that the last edge may
    /// return to a vertex entered earlier.
    pub fn is_path(&self, g: &Digraph) -> bool {
        let Some((_, inner)) = self.0.split_last() else {
            return true;
        };
        let mut heads: Vec<_> = inner.iter().map(|&e| g.head(e)).collect();
        heads.sort_unstable();
        heads.windows(2).all(|w| w[0] != w[1]) && {
            let mut edges = self.0.clone();
            edges.sort_unstable();
            edges.windows(2).all(|w| w[0] != w[1])
        }
    }
}

/// Every walk of exactly `len` edges from `e` to `f`.
pub fn enumerate_walks(g: &Digraph, e: EdgeId, f: EdgeId, len: usize) -> Vec<Walk> {
    let mut out = Vec::new();
    if len == 0 || e >= g.m() || f >= g.m() {
        return out;
    }
    let mut stack = vec![e];
    extend_walks(g, &mut stack, len, &mut |w| {
        if w.last() == Some(&f) {
            out.push(Walk(w.to_vec()));
        }
    });
    out
}

/// Calls `visit` on `prefix` extended to every walk of exactly `len` edges.
fn extend_walks(
    g: &Digraph,
    prefix: &mut Vec<EdgeId>,
    len: usize,
    visit: &mut dyn FnMut(&[EdgeId]),
) {
    if prefix.len() == len {
        visit(prefix);
        return;
    }
    let last = *prefix.last().expect("walks are nonempty");
    for &next in g.successors(last) {
        prefix.push(next);
        extend_walks(g, prefix, len, visit);
        prefix.pop();
    }
}

/// Walks from `start` of at most `max_len` edges, in DFS order.
fn walks_from(g: &Digraph, start: EdgeId, max_len: usize) -> Vec<Vec<EdgeId>> {
    fn go(g: &Digraph, prefix: &mut Vec<EdgeId>, max_len: usize, out: &mut Vec<Vec<EdgeId>>) {
        out.push(prefix.clone());
        if prefix.len() == max_len {
            return;
        }
        let last = *prefix.last().expect("walks are nonempty");
        for &next in g.successors(last) {
            prefix.push(next);
            go(g, prefix, max_len, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if max_len > 0 {
        go(g, &mut vec![start], max_len, &mut out);
    }
    out
}

/// Collection weights with multiplicity, by total length.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CollectionCounts {
    /// `all[ℓ][ξ]`: collections of total length `ℓ` with weight `ξ`.
    pub all: Vec<BTreeMap<Monomial, usize>>,
    /// Same, restricted to pairwise edge-disjoint collections.
    pub disjoint: Vec<BTreeMap<Monomial, usize>>,
}

impl CollectionCounts {
    /// Weights with odd multiplicity among collections of length `len`.
    pub fn odd_all(&self, len: usize) -> BTreeSet<Monomial> {
        odd_terms(self.all.get(len))
    }

    pub fn odd_disjoint(&self, len: usize) -> BTreeSet<Monomial> {
        odd_terms(self.disjoint.get(len))
    }
}

fn odd_terms(counts: Option<&BTreeMap<Monomial, usize>>) -> BTreeSet<Monomial> {
    counts
        .into_iter()
        .flatten()
        .filter(|(_, &c)| c % 2 == 1)
        .map(|(m, _)| m.clone())
        .collect()
}

struct Candidate {
    end: usize,
    len: usize,
    distinct: Vec<EdgeId>,
    weight: Monomial,
}

/// Counts every collection of `|S|` walks of total length at most
/// `max_length`: walk `i` starts at the `i`-th edge of `S` and the walks end
/// at distinct edges of `T`.
pub fn collection_counts(
    g: &Digraph,
    sources: &EdgeSet,
    sinks: &EdgeSet,
    max_length: usize,
) -> Result<CollectionCounts, SeriesError> {
    let r = sources.len();
    if sinks.len() != r {
        return Err(SeriesError::SizeMismatch {
            rows: r,
            cols: sinks.len(),
        });
    }
    if let Some(edge) = sources.iter().chain(sinks.iter()).find(|&e| e >= g.m()) {
        return Err(SeriesError::BadEdge { edge });
    }
    let mut counts = CollectionCounts {
        all: vec![BTreeMap::new(); max_length + 1],
        disjoint: vec![BTreeMap::new(); max_length + 1],
    };
    if r == 0 {
        counts.all[0].insert(Monomial::one(), 1);
        counts.disjoint[0].insert(Monomial::one(), 1);
        return Ok(counts);
    }
    if max_length < r {
        return Ok(counts);
    }
    let per_walk = max_length - (r - 1);
    let candidates: Vec<Vec<Candidate>> = sources
        .iter()
        .map(|s| {
            walks_from(g, s, per_walk)
                .into_iter()
                .filter_map(|w| {
                    let end = sinks.ids().binary_search(w.last()?).ok()?;
                    let mut distinct = w.clone();
                    distinct.sort_unstable();
                    distinct.dedup();
                    let weight = Walk(w.clone()).weight();
                    Some(Candidate {
                        end,
                        len: w.len(),
                        distinct,
                        weight,
                    })
                })
                .collect()
        })
        .collect();

    struct State<'a> {
        candidates: &'a [Vec<Candidate>],
        max_length: usize,
        used_ends: Vec<bool>,
        edge_use: Vec<u32>,
        counts: &'a mut CollectionCounts,
    }

    fn place(st: &mut State<'_>, i: usize, length: usize, weight: &Monomial, disjoint: bool) {
        if i == st.candidates.len() {
            *st.counts.all[length].entry(weight.clone()).or_default() += 1;
            if disjoint {
                *st.counts.disjoint[length]
                    .entry(weight.clone())
                    .or_default() += 1;
            }
            return;
        }
        let remaining = st.candidates.len() - i - 1;
        for c in &st.candidates[i] {
            if st.used_ends[c.end] || length + c.len + remaining > st.max_length {
                continue;
            }
            let clash = c.distinct.iter().any(|&e| st.edge_use[e] > 0);
            st.used_ends[c.end] = true;
            for &e in &c.distinct {
                st.edge_use[e] += 1;
            }
            place(
                st,
                i + 1,
                length + c.len,
                &weight.mul(&c.weight),
                disjoint && !clash,
            );
            for &e in &c.distinct {
                st.edge_use[e] -= 1;
            }
            st.used_ends[c.end] = false;
        }
    }

    let mut st = State {
        candidates: &candidates,
        max_length,
        used_ends: vec![false; r],
        edge_use: vec![0; g.m()],
        counts: &mut counts,
    };
    place(&mut st, 0, 0, &Monomial::one(), true);
    Ok(counts)
}

/// `ξ` of every collection in `𝒟_ℓ(S, T)`, reduced mod 2.
pub fn enumerate_disjoint_collections(
    g: &Digraph,
    sources: &EdgeSet,
    sinks: &EdgeSet,
    total_length: usize,
) -> Result<BTreeSet<Monomial>, SeriesError> {
    Ok(collection_counts(g, sources, sinks, total_length)?.odd_disjoint(total_length))
}

/// Whether all collections and edge-disjoint collections of total length
/// `len` have the same generating function mod 2.
pub fn verify_cancellation(
    g: &Digraph,
    sources: &EdgeSet,
    sinks: &EdgeSet,
    total_length: usize,
) -> Result<bool, SeriesError> {
    let counts = collection_counts(g, sources, sinks, total_length)?;
    Ok(counts.odd_all(total_length) == counts.odd_disjoint(total_length))
}

/// Generating function of edge-disjoint collections with weight degree at
/// most `d`.
pub fn disjoint_generating_function(
    g: &Digraph,
    sources: &EdgeSet,
    sinks: &EdgeSet,
    d: usize,
) -> Result<TruncatedPoly, SeriesError> {
    let r = sources.len();
    let counts = collection_counts(g, sources, sinks, d + r)?;
    Ok(TruncatedPoly::from_terms(
        (r..=d + r).flat_map(|l| counts.odd_disjoint(l)),
        d,
    ))
}

/// Replaces each walk by a shortest walk from its first to its last edge
/// that only uses the walk's own edges.
pub fn walks_to_paths(g: &Digraph, walks: &[Walk]) -> Result<Vec<Walk>, SeriesError> {
    let mut owner = vec![usize::MAX; g.m()];
    for (i, w) in walks.iter().enumerate() {
        for &e in w.edges() {
            if e >= g.m() {
                return Err(SeriesError::BadEdge { edge: e });
            }
            if owner[e] != usize::MAX && owner[e] != i {
                return Err(SeriesError::NotDisjoint(e));
            }
            owner[e] = i;
        }
    }
    Ok(walks
        .iter()
        .enumerate()
        .map(|(i, w)| match (w.first(), w.last()) {
            (Some(first), Some(last)) => Walk(shortest_walk(g, first, last, |e| owner[e] == i)),
            _ => w.clone(),
        })
        .collect())
}

fn shortest_walk(
    g: &Digraph,
    from: EdgeId,
    to: EdgeId,
    allowed: impl Fn(EdgeId) -> bool,
) -> Vec<EdgeId> {
    let mut pred = vec![usize::MAX; g.m()];
    let mut queue = VecDeque::from([from]);
    pred[from] = from;
    while let Some(e) = queue.pop_front() {
        if e == to {
            break;
        }
        for &f in g.successors(e) {
            if allowed(f) && pred[f] == usize::MAX {
                pred[f] = e;
                queue.push_back(f);
            }
        }
    }
    let mut path = vec![to];
    let mut e = to;
    while e != from {
        e = pred[e];
        path.push(e);
    }
    path.reverse();
    path
}

/// Settings for [`run_corpus`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusConfig {
    /// Every simple digraph with at most this many vertices.
    pub exhaustive_n: usize,
    pub random_graphs: usize,
    pub random_max_n: usize,
    pub random_max_m: usize,
    pub max_degree: usize,
    pub max_minor: usize,
    /// Longest total length checked by the cancellation identity.
    pub cancellation_length: usize,
    pub seed: u64,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            exhaustive_n: 3,
            random_graphs: 100,
            random_max_n: 5,
            random_max_m: 8,
            max_degree: 6,
            max_minor: 3,
            cancellation_length: 8,
            seed: 0x5e71e5,
        }
    }
}

/// Pass/fail counts for one identity.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Tally {
    pub passed: usize,
    pub failed: usize,
}

impl Tally {
    fn record(&mut self, ok: bool) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
    }

    fn merge(&mut self, other: Tally) {
        self.passed += other.passed;
        self.failed += other.failed;
    }
}

/// The checks run by [`check_graph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Identity {
    /// `(I - X) Γ = I` up to the degree bound.
    Inverse,
    /// `Γ[e,f]` is the mod-2 sum of walk weights from `e` to `f`.
    WalkSums,
    /// `det Γ[S,T]` is the generating function of edge-disjoint collections.
    DisjointMinor,
    /// All collections and edge-disjoint collections agree mod 2.
    Cancellation,
    /// On a DAG, `det Γ[S,T] != 0` iff `r` edge-disjoint paths exist.
    DagRank,
}

impl Identity {
    pub const ALL: [Identity; 5] = [
        Identity::Inverse,
        Identity::WalkSums,
        Identity::DisjointMinor,
        Identity::Cancellation,
        Identity::DagRank,
    ];
}

/// Tallies per identity, separately for acyclic and cyclic graphs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusReport {
    pub graphs: usize,
    pub dags: usize,
    pub acyclic: BTreeMap<Identity, Tally>,
    pub cyclic: BTreeMap<Identity, Tally>,
    /// A few failing instances, as readable descriptions.
    pub examples: Vec<String>,
}

const MAX_EXAMPLES: usize = 8;

impl CorpusReport {
    pub fn passed(&self) -> bool {
        self.failed(None) == 0
    }

    /// Failures of `identity`, or of every identity for `None`.
    pub fn failed(&self, identity: Option<Identity>) -> usize {
        self.acyclic
            .iter()
            .chain(&self.cyclic)
            .filter(|(id, _)| identity.is_none_or(|want| **id == want))
            .map(|(_, t)| t.failed)
            .sum()
    }

    pub fn total(&self, identity: Identity) -> Tally {
        let mut t = Tally::default();
        for table in [&self.acyclic, &self.cyclic] {
            t.merge(table.get(&identity).copied().unwrap_or_default());
        }
        t
    }

    fn record(
        &mut self,
        acyclic: bool,
        identity: Identity,
        ok: bool,
        describe: impl FnOnce() -> String,
    ) {
        let table = if acyclic {
            &mut self.acyclic
        } else {
            &mut self.cyclic
        };
        table.entry(identity).or_default().record(ok);
        if !ok && self.examples.len() < MAX_EXAMPLES {
            self.examples.push(describe());
        }
    }

    fn merge(&mut self, other: CorpusReport) {
        self.graphs += other.graphs;
        self.dags += other.dags;
        for (mine, theirs) in [
            (&mut self.acyclic, other.acyclic),
            (&mut self.cyclic, other.cyclic),
        ] {
            for (id, t) in theirs {
                mine.entry(id).or_default().merge(t);
            }
        }
        for e in other.examples {
            if self.examples.len() < MAX_EXAMPLES {
                self.examples.push(e);
            }
        }
    }
}

/// Every simple digraph on `n` labelled vertices.
pub fn all_simple_digraphs(n: usize) -> impl Iterator<Item = Digraph> {
    let pairs: Vec<_> = (0..n)
        .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
        .collect();
    assert!(pairs.len() < 32, "too many graphs to list");
    (0u32..1 << pairs.len()).map(move |mask| {
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        Digraph::new(n, edges).expect("pairs are valid")
    })
}

/// The graphs [`run_corpus`] checks, in order.
pub fn corpus_graphs(config: &CorpusConfig) -> Vec<Digraph> {
    use rand::{Rng, SeedableRng};

    let mut graphs: Vec<Digraph> = (1..=config.exhaustive_n)
        .flat_map(all_simple_digraphs)
        .collect();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(config.seed);
    for _ in 0..config.random_graphs {
        let n = rng.random_range(1..=config.random_max_n.max(1));
        let m = rng.random_range(0..=config.random_max_m.min(n * (n - 1)));
        graphs.push(crate::graph::gen_random(n, m, false, &mut rng).expect("m fits"));
    }
    graphs
}

/// Runs every identity check over the exhaustive and random corpus.
pub fn run_corpus(config: &CorpusConfig) -> CorpusReport {
    use rayon::prelude::*;

    corpus_graphs(config)
        .par_iter()
        .map(|g| check_graph(g, config))
        .reduce(CorpusReport::default, |mut a, b| {
            a.merge(b);
            a
        })
}

fn describe(g: &Digraph) -> String {
    format!("n={} edges={:?}", g.n(), g.edges())
}

/// All identity checks on one graph.
pub fn check_graph(g: &Digraph, config: &CorpusConfig) -> CorpusReport {
    let acyclic = g.is_acyclic();
    let mut report = CorpusReport {
        graphs: 1,
        dags: usize::from(acyclic),
        ..Default::default()
    };
    let x = symbolic_x(g);
    let gammas: Vec<TruncatedSeriesMatrix> = (0..=config.max_degree)
        .map(|d| truncated_gamma(&x, d).expect("X has no constant term"))
        .collect();

    let mut walk_sums = vec![TruncatedPoly::zero(config.max_degree); g.m() * g.m()];
    for e in 0..g.m() {
        for w in walks_from(g, e, config.max_degree + 1) {
            let f = *w.last().expect("nonempty");
            walk_sums[e * g.m() + f].toggle(Walk(w).weight());
        }
    }
    for (d, gamma) in gammas.iter().enumerate() {
        let ok = x.truncate(d).identity_minus().mul(gamma).is_identity();
        report.record(acyclic, Identity::Inverse, ok, || {
            format!("{}: (I-X)Γ != I at D={d}", describe(g))
        });
        for e in 0..g.m() {
            for f in 0..g.m() {
                let ok = *gamma.get(e, f) == walk_sums[e * g.m() + f].truncate(d);
                report.record(acyclic, Identity::WalkSums, ok, || {
                    format!(
                        "{}: Γ[{e},{f}] differs from its walk sum at D={d}",
                        describe(g)
                    )
                });
            }
        }
    }

    let cancel_len = config.cancellation_length;
    for r in 1..=config.max_minor.min(g.m()) {
        let subsets: Vec<EdgeSet> = (0..g.m()).combinations(r).map(EdgeSet::new).collect();
        let max_len = (config.max_degree + r).max(cancel_len);
        for s in &subsets {
            for t in &subsets {
                let counts = collection_counts(g, s, t, max_len).expect("sizes match");
                for (d, gamma) in gammas.iter().enumerate() {
                    let det = det_submatrix(gamma, s, t).expect("small minor");
                    let want = TruncatedPoly::from_terms(
                        (r..=d + r).flat_map(|l| counts.odd_disjoint(l)),
                        d,
                    );
                    report.record(acyclic, Identity::DisjointMinor, det == want, || {
                        format!(
                            "{}: det Γ[{:?},{:?}] at D={d}",
                            describe(g),
                            s.ids(),
                            t.ids()
                        )
                    });
                }
                for len in r..=cancel_len {
                    let ok = counts.odd_all(len) == counts.odd_disjoint(len);
                    report.record(acyclic, Identity::Cancellation, ok, || {
                        format!(
                            "{}: cancellation {:?}->{:?} at length {len}",
                            describe(g),
                            s.ids(),
                            t.ids()
                        )
                    });
                }
            }
        }
    }

    if acyclic {
        for r in 1..=config.max_minor.min(g.m()) {
            let gamma = truncated_gamma(&x, g.n() - 1 + r).expect("X has no constant term");
            let subsets: Vec<EdgeSet> = (0..g.m()).combinations(r).map(EdgeSet::new).collect();
            for s in &subsets {
                for t in &subsets {
                    let nonzero = !det_submatrix(&gamma, s, t).expect("small minor").is_zero();
                    let flow = crate::oracle::disjoint_paths_between_edge_sets(g, s, t);
                    report.record(true, Identity::DagRank, nonzero == (flow >= r), || {
                        format!(
                            "{}: det nonzero={nonzero}, flow={flow} for {:?}->{:?}",
                            describe(g),
                            s.ids(),
                            t.ids()
                        )
                    });
                }
            }
        }
    }
    report
}
