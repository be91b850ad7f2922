//! Directed multigraphs with dense edge ids, generators, weak components and
//! the edge-list text format.
//!
//! Edge ids are positions in the edge list, so every matrix indexed by edges
//! is a plain dense array. Self-loops are never representable. Parallel edges
//! are allowed by [`Digraph`] itself (the degree-reduction gadget needs them)
//! but rejected for user input by [`read_edge_list`] and [`Digraph::is_simple`].

use std::collections::HashSet;
use std::fmt::Write as _;
use std::io::{self, BufRead, Write};

use rand::seq::{index, SliceRandom};
use rand::Rng;
use thiserror::Error;

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    BadVertex { vertex: VertexId, n: usize },
    #[error("edge {edge} out of range for graph with {m} edges")]
    BadEdge { edge: EdgeId, m: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),
    #[error("cannot place {m} edges on {n} vertices (at most {max})")]
    InfeasibleEdgeCount { n: usize, m: usize, max: usize },
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: VertexId },
    #[error("line {line}: vertex {vertex} out of range for {n} vertices")]
    OutOfRange {
        line: usize,
        vertex: VertexId,
        n: usize,
    },
    #[error("line {line}: parallel edge {tail} -> {head}")]
    ParallelEdge {
        line: usize,
        tail: VertexId,
        head: VertexId,
    },
    #[error("expected {expected} edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("missing header line \"n m\"")]
    MissingHeader,
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Directed multigraph without self-loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    edges: Vec<(VertexId, VertexId)>,
    out_adj: Vec<Vec<EdgeId>>,
    in_adj: Vec<Vec<EdgeId>>,
}

/// Sorted set of edge ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSet(Vec<EdgeId>);

impl EdgeSet {
    pub fn new(ids: impl IntoIterator<Item = EdgeId>) -> Self {
        let mut v: Vec<_> = ids.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        EdgeSet(v)
    }

    pub fn ids(&self) -> &[EdgeId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.0.binary_search(&e).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.0.iter().copied()
    }
}

impl FromIterator<EdgeId> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = EdgeId>>(iter: I) -> Self {
        EdgeSet::new(iter)
    }
}

impl Digraph {
    pub fn new(n: usize, edges: Vec<(VertexId, VertexId)>) -> Result<Self, GraphError> {
        for &(u, v) in &edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::BadVertex { vertex: x, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
        }
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for (id, &(u, v)) in edges.iter().enumerate() {
            out_adj[u].push(id);
            in_adj[v].push(id);
        }
        Ok(Digraph {
            n,
            edges,
            out_adj,
            in_adj,
        })
    }

    pub fn empty(n: usize) -> Self {
        Digraph::new(n, Vec::new()).expect("no edges to validate")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    pub fn tail(&self, e: EdgeId) -> VertexId {
        self.edges[e].0
    }

    pub fn head(&self, e: EdgeId) -> VertexId {
        self.edges[e].1
    }

    /// Ids of edges leaving `s`, ascending. Panics on a bad vertex.
    pub fn out_ids(&self, s: VertexId) -> &[EdgeId] {
        &self.out_adj[s]
    }

    /// Ids of edges entering `t`, ascending. Panics on a bad vertex.
    pub fn in_ids(&self, t: VertexId) -> &[EdgeId] {
        &self.in_adj[t]
    }

    pub fn out_edges(&self, s: VertexId) -> Result<EdgeSet, GraphError> {
        self.check_vertex(s)?;
        Ok(EdgeSet(self.out_adj[s].clone()))
    }

    pub fn in_edges(&self, t: VertexId) -> Result<EdgeSet, GraphError> {
        self.check_vertex(t)?;
        Ok(EdgeSet(self.in_adj[t].clone()))
    }

    pub fn out_degree(&self, s: VertexId) -> usize {
        self.out_adj[s].len()
    }

    pub fn in_degree(&self, t: VertexId) -> usize {
        self.in_adj[t].len()
    }

    /// Whether `f` can follow `e` in a walk.
    #[inline]
    pub fn composable(&self, e: EdgeId, f: EdgeId) -> bool {
        self.edges[e].1 == self.edges[f].0
    }

    /// Edges that may follow `e` in a walk.
    pub fn successors(&self, e: EdgeId) -> &[EdgeId] {
        &self.out_adj[self.edges[e].1]
    }

    /// No parallel edges (self-loops are excluded by construction).
    pub fn is_simple(&self) -> bool {
        let mut seen = HashSet::with_capacity(self.edges.len());
        self.edges.iter().all(|e| seen.insert(*e))
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::BadVertex {
                vertex: v,
                n: self.n,
            })
        }
    }

    pub fn check_edge(&self, e: EdgeId) -> Result<(), GraphError> {
        if e < self.m() {
            Ok(())
        } else {
            Err(GraphError::BadEdge {
                edge: e,
                m: self.m(),
            })
        }
    }

    /// Same graph with edge `e` removed; later ids shift down by one.
    pub fn without_edge(&self, e: EdgeId) -> Digraph {
        let mut edges = self.edges.clone();
        edges.remove(e);
        Digraph::new(self.n, edges).expect("subgraph of a valid graph")
    }

    /// Kahn's algorithm; `None` if the graph has a directed cycle.
    pub fn topological_order(&self) -> Option<Vec<VertexId>> {
        let mut indeg: Vec<usize> = (0..self.n).map(|v| self.in_degree(v)).collect();
        let mut stack: Vec<VertexId> = (0..self.n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(self.n);
        while let Some(v) = stack.pop() {
            order.push(v);
            for &e in &self.out_adj[v] {
                let h = self.head(e);
                indeg[h] -= 1;
                if indeg[h] == 0 {
                    stack.push(h);
                }
            }
        }
        (order.len() == self.n).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }
}

/// A weakly connected component with id maps back into the parent graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub graph: Digraph,
    /// `vertices[local] = global`, ascending.
    pub vertices: Vec<VertexId>,
    /// `edges[local] = global`, ascending (relative edge order is kept).
    pub edges: Vec<EdgeId>,
}

/// Splits `g` into weakly connected components, ordered by smallest vertex.
pub fn weak_components(g: &Digraph) -> Vec<Component> {
    let mut parent: Vec<usize> = (0..g.n()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(u, v) in g.edges() {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru.max(rv)] = ru.min(rv);
        }
    }

    let mut comp_of_root = vec![usize::MAX; g.n()];
    let mut local = vec![0usize; g.n()];
    let mut members: Vec<Vec<VertexId>> = Vec::new();
    for (v, slot) in local.iter_mut().enumerate() {
        let r = find(&mut parent, v);
        if comp_of_root[r] == usize::MAX {
            comp_of_root[r] = members.len();
            members.push(Vec::new());
        }
        let c = comp_of_root[r];
        *slot = members[c].len();
        members[c].push(v);
    }

    let mut comp_edges: Vec<Vec<EdgeId>> = vec![Vec::new(); members.len()];
    for (id, &(u, _)) in g.edges().iter().enumerate() {
        let r = find(&mut parent, u);
        comp_edges[comp_of_root[r]].push(id);
    }

    members
        .into_iter()
        .zip(comp_edges)
        .map(|(vertices, edges)| {
            let local_edges = edges
                .iter()
                .map(|&e| {
                    let (u, v) = g.edge(e);
                    (local[u], local[v])
                })
                .collect();
            let graph = Digraph::new(vertices.len(), local_edges).expect("relabelled component");
            Component {
                graph,
                vertices,
                edges,
            }
        })
        .collect()
}

/// Uniformly random simple digraph with exactly `m` edges.
///
/// With `acyclic`, edges only go forward in a random vertex permutation, so
/// at most `n(n-1)/2` edges fit. Edges come out sorted by `(tail, head)`.
pub fn gen_random<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    acyclic: bool,
    rng: &mut R,
) -> Result<Digraph, GraphError> {
    let pairs = n * n.saturating_sub(1);
    let max = if acyclic { pairs / 2 } else { pairs };
    if m > max {
        return Err(GraphError::InfeasibleEdgeCount { n, m, max });
    }
    let mut perm: Vec<VertexId> = (0..n).collect();
    if acyclic {
        perm.shuffle(rng);
    }
    let mut edges: Vec<(VertexId, VertexId)> = index::sample(rng, max, m)
        .into_iter()
        .map(|i| {
            if acyclic {
                let (a, b) = forward_pair(n, i);
                (perm[a], perm[b])
            } else {
                // pair index i -> (u, v) with v != u
                let u = i / (n - 1);
                let r = i % (n - 1);
                (u, if r >= u { r + 1 } else { r })
            }
        })
        .collect();
    edges.sort_unstable();
    Digraph::new(n, edges)
}

// i-th pair (a, b) with a < b in row-major order.
fn forward_pair(n: usize, mut i: usize) -> (usize, usize) {
    let mut a = 0;
    loop {
        let row = n - 1 - a;
        if i < row {
            return (a, a + 1 + i);
        }
        i -= row;
        a += 1;
    }
}

/// Parses the edge-list format. Parallel edges are rejected.
pub fn read_edge_list<R: BufRead>(reader: R) -> Result<Digraph, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (a, b) = parse_pair(trimmed, lineno)?;
        let Some((n, m)) = header else {
            header = Some((a, b));
            continue;
        };
        if edges.len() == m {
            return Err(ParseError::EdgeCount {
                expected: m,
                found: m + 1,
            });
        }
        for vertex in [a, b] {
            if vertex >= n {
                return Err(ParseError::OutOfRange {
                    line: lineno,
                    vertex,
                    n,
                });
            }
        }
        if a == b {
            return Err(ParseError::SelfLoop {
                line: lineno,
                vertex: a,
            });
        }
        if !seen.insert((a, b)) {
            return Err(ParseError::ParallelEdge {
                line: lineno,
                tail: a,
                head: b,
            });
        }
        edges.push((a, b));
    }
    let (n, m) = header.ok_or(ParseError::MissingHeader)?;
    if edges.len() != m {
        return Err(ParseError::EdgeCount {
            expected: m,
            found: edges.len(),
        });
    }
    Ok(Digraph::new(n, edges).expect("validated while parsing"))
}

pub fn parse_edge_list(text: &str) -> Result<Digraph, ParseError> {
    read_edge_list(text.as_bytes())
}

fn parse_pair(line: &str, lineno: usize) -> Result<(usize, usize), ParseError> {
    let syntax = |message: String| ParseError::Syntax {
        line: lineno,
        message,
    };
    let mut it = line.split_whitespace();
    let mut next = |what: &str| -> Result<usize, ParseError> {
        let tok = it.next().ok_or_else(|| syntax(format!("missing {what}")))?;
        tok.parse::<usize>()
            .map_err(|_| syntax(format!("expected a nonnegative integer, got {tok:?}")))
    };
    let a = next("first integer")?;
    let b = next("second integer")?;
    if let Some(extra) = it.next() {
        return Err(syntax(format!("unexpected token {extra:?}")));
    }
    Ok((a, b))
}

/// Canonical text: `"n m\n"` then one `"u v\n"` per edge in id order.
pub fn edge_list_string(g: &Digraph) -> String {
    let mut s = String::with_capacity(8 * (g.m() + 1));
    writeln!(s, "{} {}", g.n(), g.m()).unwrap();
    for &(u, v) in g.edges() {
        writeln!(s, "{u} {v}").unwrap();
    }
    s
}

pub fn write_edge_list<W: Write>(g: &Digraph, mut w: W) -> io::Result<()> {
    w.write_all(edge_list_string(g).as_bytes())
}
