//! Ground truth by unit-capacity maximum flow.
//!
//! `λ(s,t)` is the value of a unit-capacity s-t flow. Augmenting paths are
//! found by BFS; with unit capacities at most `min(outdeg(s), indeg(t))`
//! augmentations happen, which is plenty at desk scale.

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::connectivity::{Bound, ConnectivityMatrix};
use crate::graph::{Digraph, EdgeId, EdgeSet, VertexId};

/// Residual network with unit capacities. Arc `2i` is the `i`-th forward
/// arc and `2i + 1` its reverse.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u8>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork {
            adj: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
        }
    }

    /// Unit arc from every edge of `g`; arc `i` of the result is edge `i`.
    pub fn from_digraph(g: &Digraph) -> Self {
        let mut net = FlowNetwork::new(g.n());
        for &(u, v) in g.edges() {
            net.add_arc(u, v);
        }
        net
    }

    pub fn add_arc(&mut self, u: usize, v: usize) -> usize {
        let id = self.to.len() / 2;
        self.adj[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(1);
        self.adj[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(0);
        id
    }

    /// Whether forward arc `id` carries flow.
    pub fn carries_flow(&self, id: usize) -> bool {
        self.cap[2 * id] == 0
    }

    /// Augments from `s` to `t` until no path remains; returns the value.
    pub fn max_flow(&mut self, s: usize, t: usize) -> usize {
        if s == t {
            return 0;
        }
        let mut flow = 0;
        let mut pred = vec![usize::MAX; self.adj.len()];
        let mut queue = VecDeque::new();
        loop {
            pred.iter_mut().for_each(|p| *p = usize::MAX);
            queue.clear();
            queue.push_back(s);
            let mut reached = false;
            'bfs: while let Some(u) = queue.pop_front() {
                for &arc in &self.adj[u] {
                    let v = self.to[arc];
                    if self.cap[arc] == 1 && v != s && pred[v] == usize::MAX {
                        pred[v] = arc;
                        if v == t {
                            reached = true;
                            break 'bfs;
                        }
                        queue.push_back(v);
                    }
                }
            }
            if !reached {
                return flow;
            }
            let mut v = t;
            while v != s {
                let arc = pred[v];
                self.cap[arc] -= 1;
                self.cap[arc ^ 1] += 1;
                v = self.to[arc ^ 1];
            }
            flow += 1;
        }
    }
}

/// `λ(s,t)`; 0 when `s == t`.
pub fn max_flow(g: &Digraph, s: VertexId, t: VertexId) -> usize {
    FlowNetwork::from_digraph(g).max_flow(s, t)
}

/// A maximum family of pairwise edge-disjoint simple s-t paths, recovered by
/// decomposing a maximum flow. Its length is `λ(s,t)`.
pub fn edge_disjoint_paths(g: &Digraph, s: VertexId, t: VertexId) -> Vec<Vec<EdgeId>> {
    let mut net = FlowNetwork::from_digraph(g);
    let value = net.max_flow(s, t);
    let mut used = vec![false; g.m()];
    let mut paths = Vec::with_capacity(value);
    for _ in 0..value {
        let mut path: Vec<EdgeId> = Vec::new();
        let mut v = s;
        while v != t {
            let e = g
                .out_ids(v)
                .iter()
                .copied()
                .find(|&e| !used[e] && net.carries_flow(e))
                .expect("flow conservation leaves an outgoing flow edge");
            used[e] = true;
            let h = g.head(e);
            // drop any cycle the walk just closed
            if h == s {
                path.clear();
            } else if let Some(pos) = path.iter().position(|&p| g.head(p) == h) {
                path.truncate(pos + 1);
            } else {
                path.push(e);
            }
            v = h;
        }
        paths.push(path);
    }
    paths
}

/// Naive all-pairs connectivity: one max flow per ordered pair.
pub fn all_pairs_oracle(g: &Digraph) -> ConnectivityMatrix {
    let n = g.n();
    let base = FlowNetwork::from_digraph(g);
    let rows: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|s| {
            (0..n)
                .map(|t| {
                    if s == t {
                        0
                    } else {
                        base.clone().max_flow(s, t)
                    }
                })
                .collect()
        })
        .collect();
    ConnectivityMatrix::from_rows(rows, Bound::Exact)
}

/// Maximum number of pairwise edge-disjoint walks that start at distinct
/// edges of `sources` and end at distinct edges of `sinks`.
///
/// Every edge becomes a unit arc `e_in -> e_out`; `e_out -> f_in` links
/// consecutive edges; a super source feeds each source edge and each sink
/// edge drains into a super sink. An edge in both sets is a walk of length
/// one.
pub fn disjoint_paths_between_edge_sets(g: &Digraph, sources: &EdgeSet, sinks: &EdgeSet) -> usize {
    let m = g.m();
    let (source, sink) = (2 * m, 2 * m + 1);
    let mut net = FlowNetwork::new(2 * m + 2);
    for e in 0..m {
        net.add_arc(2 * e, 2 * e + 1);
    }
    for e in 0..m {
        for &f in g.successors(e) {
            net.add_arc(2 * e + 1, 2 * f);
        }
    }
    for e in sources.iter() {
        net.add_arc(source, 2 * e);
    }
    for f in sinks.iter() {
        net.add_arc(2 * f + 1, sink);
    }
    net.max_flow(source, sink)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::gen_random;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn diamond() -> Digraph {
        Digraph::new(4, vec![(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn complete(n: usize) -> Digraph {
        let edges = (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)));
        Digraph::new(n, edges.collect()).unwrap()
    }

    #[test]
    fn small_flows() {
        let single = Digraph::new(2, vec![(0, 1)]).unwrap();
        assert_eq!(max_flow(&single, 0, 1), 1);
        assert_eq!(max_flow(&single, 1, 0), 0);
        assert_eq!(max_flow(&diamond(), 0, 3), 2);
        let k4 = complete(4);
        for s in 0..4 {
            for t in 0..4 {
                if s != t {
                    assert_eq!(max_flow(&k4, s, t), 3);
                }
            }
        }
    }

    #[test]
    fn all_pairs_tables() {
        let empty = all_pairs_oracle(&Digraph::empty(4));
        assert_eq!(empty.max_value(), 0);

        let cycle = Digraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let c = all_pairs_oracle(&cycle);
        for s in 0..4 {
            for t in 0..4 {
                assert_eq!(c.get(s, t), usize::from(s != t));
            }
        }
    }

    #[test]
    fn edge_set_flows() {
        let d = diamond();
        let e = EdgeSet::new([1]);
        assert_eq!(disjoint_paths_between_edge_sets(&d, &e, &e), 1);
        let out0 = d.out_edges(0).unwrap();
        let in3 = d.in_edges(3).unwrap();
        assert_eq!(disjoint_paths_between_edge_sets(&d, &out0, &in3), 2);

        let two = Digraph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        assert_eq!(
            disjoint_paths_between_edge_sets(&two, &EdgeSet::new([0]), &EdgeSet::new([1])),
            0
        );
    }

    fn random_graph(rng: &mut ChaCha8Rng) -> Digraph {
        let n = rng.random_range(2..9);
        let m = rng.random_range(0..=n * (n - 1));
        gen_random(n, m, false, rng).unwrap()
    }

    #[test]
    fn vertex_flow_equals_edge_set_flow() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..60 {
            let g = random_graph(&mut rng);
            for s in 0..g.n() {
                for t in 0..g.n() {
                    if s == t {
                        continue;
                    }
                    let via_sets = disjoint_paths_between_edge_sets(
                        &g,
                        &g.out_edges(s).unwrap(),
                        &g.in_edges(t).unwrap(),
                    );
                    assert_eq!(max_flow(&g, s, t), via_sets);
                }
            }
        }
    }

    #[test]
    fn decomposition_yields_disjoint_simple_paths() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..60 {
            let g = random_graph(&mut rng);
            for s in 0..g.n() {
                for t in 0..g.n() {
                    if s == t {
                        continue;
                    }
                    let paths = edge_disjoint_paths(&g, s, t);
                    assert_eq!(paths.len(), max_flow(&g, s, t));
                    let mut seen = std::collections::HashSet::new();
                    for p in &paths {
                        assert_eq!(g.tail(p[0]), s);
                        assert_eq!(g.head(*p.last().unwrap()), t);
                        let mut visited = vec![s];
                        for w in p.windows(2) {
                            assert!(g.composable(w[0], w[1]));
                        }
                        for &e in p {
                            assert!(seen.insert(e), "edge reused across paths");
                            assert!(!visited.contains(&g.head(e)), "vertex repeated");
                            visited.push(g.head(e));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn deleting_an_edge_costs_at_most_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..30 {
            let g = random_graph(&mut rng);
            if g.m() == 0 {
                continue;
            }
            let before = all_pairs_oracle(&g);
            let e = rng.random_range(0..g.m());
            let after = all_pairs_oracle(&g.without_edge(e));
            for s in 0..g.n() {
                for t in 0..g.n() {
                    let (b, a) = (before.get(s, t), after.get(s, t));
                    assert!(a <= b && b - a <= 1);
                }
            }
        }
    }
}
