//! Chordal graphs, their clique graphs and junction forests.

mod forest;
mod network;
mod random;

use thiserror::Error;

use crate::nodeset::{NodeSet, MAX_VARS};
use crate::scoring::ScoreError;

pub use forest::{
    check_running_intersection, clique_graph, forest_is_acyclic, is_balanced,
    max_weight_spanning_forest, separators_of, CliqueEdge, CliqueGraph, SpanningForest,
};
pub use network::{
    check_structure, junction_forest, network_from_graph, ChordalNetwork, StructureReport,
};
pub use random::random_chordal;

#[derive(Debug, Error, PartialEq)]
pub enum ChordalError {
    #[error("graph is not chordal")]
    NotChordal,
    #[error("cliques {0} and {1} are comparable")]
    NotAntichain(NodeSet, NodeSet),
    #[error(transparent)]
    Score(#[from] ScoreError),
}

/// Simple undirected graph on at most 30 nodes, stored as adjacency masks.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<NodeSet>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_VARS, "graphs are limited to {MAX_VARS} nodes");
        Graph {
            adj: vec![NodeSet::EMPTY; n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        let all = NodeSet::full(n);
        for i in 0..n {
            g.adj[i] = all.difference(NodeSet::singleton(i));
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Graph::empty(n);
        for &(i, j) in edges {
            g.add_edge(i, j);
        }
        g
    }

    /// Graph whose edge set is the bits of `mask` over the pairs of
    /// [`Graph::pairs`], bit 0 being `(0, 1)`.
    pub fn from_edge_mask(n: usize, mask: u64) -> Self {
        let mut g = Graph::empty(n);
        for (bit, (i, j)) in Graph::pairs(n).enumerate() {
            if mask >> bit & 1 == 1 {
                g.add_edge(i, j);
            }
        }
        g
    }

    /// All pairs `i < j` in lexicographic order.
    pub fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
    }

    /// Union of the complete graphs on each clique.
    pub fn from_cliques(n: usize, cliques: &[NodeSet]) -> Self {
        let mut g = Graph::empty(n);
        for &c in cliques {
            for i in c.iter() {
                g.adj[i] = g.adj[i].union(c.difference(NodeSet::singleton(i)));
            }
        }
        g
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn add_edge(&mut self, i: usize, j: usize) {
        assert!(i != j, "self-loop on node {i}");
        assert!(i < self.n() && j < self.n(), "edge ({i},{j}) out of range");
        self.adj[i].insert(j);
        self.adj[j].insert(i);
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i].contains(j)
    }

    pub fn neighbors(&self, i: usize) -> NodeSet {
        self.adj[i]
    }

    /// Edges as `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        Graph::pairs(self.n())
            .filter(|&(i, j)| self.has_edge(i, j))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    pub fn is_clique(&self, set: NodeSet) -> bool {
        set.iter()
            .all(|i| set.difference(NodeSet::singleton(i)).is_subset(self.adj[i]))
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edges())
            .finish()
    }
}

/// Maximum cardinality search order, reversed so that it is a perfect
/// elimination ordering whenever the graph is chordal. Ties go to the
/// smallest index.
fn mcs_elimination_order(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut weight = vec![0usize; n];
    let mut numbered = NodeSet::EMPTY;
    let mut visit = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !numbered.contains(v))
            .max_by(|&a, &b| weight[a].cmp(&weight[b]).then(b.cmp(&a)))
            .expect("unnumbered node remains");
        numbered.insert(v);
        visit.push(v);
        for w in g.neighbors(v).difference(numbered).iter() {
            weight[w] += 1;
        }
    }
    visit.reverse();
    visit
}

/// True if eliminating nodes in `order` adds no fill edges.
pub fn is_perfect_elimination_ordering(g: &Graph, order: &[usize]) -> bool {
    if order.len() != g.n() {
        return false;
    }
    let mut remaining = NodeSet::full(g.n());
    for &v in order {
        if !remaining.contains(v) {
            return false;
        }
        remaining = remaining.difference(NodeSet::singleton(v));
        let later = g.neighbors(v).intersection(remaining);
        if !g.is_clique(later) {
            return false;
        }
    }
    true
}

/// A perfect elimination ordering if the graph is chordal.
pub fn elimination_ordering(g: &Graph) -> Option<Vec<usize>> {
    let order = mcs_elimination_order(g);
    is_perfect_elimination_ordering(g, &order).then_some(order)
}

/// Chordality test with a witness ordering on success.
pub fn is_chordal(g: &Graph) -> (bool, Option<Vec<usize>>) {
    match elimination_ordering(g) {
        Some(order) => (true, Some(order)),
        None => (false, None),
    }
}

/// Inclusion-maximal cliques of any graph (Bron–Kerbosch with pivoting),
/// in canonical order.
pub fn maximal_cliques(g: &Graph) -> Vec<NodeSet> {
    fn expand(g: &Graph, r: NodeSet, p: NodeSet, x: NodeSet, out: &mut Vec<NodeSet>) {
        if p.is_empty() {
            if x.is_empty() {
                out.push(r);
            }
            return;
        }
        let pivot = p
            .union(x)
            .iter()
            .max_by_key(|&u| g.neighbors(u).intersection(p).len())
            .expect("p is nonempty");
        let mut p = p;
        let mut x = x;
        for v in p.difference(g.neighbors(pivot)).iter() {
            let nv = g.neighbors(v);
            expand(g, r.with(v), p.intersection(nv), x.intersection(nv), out);
            p = p.difference(NodeSet::singleton(v));
            x = x.with(v);
        }
    }
    if g.n() == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    expand(g, NodeSet::EMPTY, NodeSet::full(g.n()), NodeSet::EMPTY, &mut out);
    out.sort();
    out
}

/// Maximal cliques of a chordal graph read off a perfect elimination
/// ordering: each node with its later neighbours, dropping non-maximal sets.
pub fn maximal_cliques_from_ordering(g: &Graph, order: &[usize]) -> Vec<NodeSet> {
    let mut remaining = NodeSet::full(g.n());
    let mut candidates = Vec::with_capacity(order.len());
    for &v in order {
        remaining = remaining.difference(NodeSet::singleton(v));
        candidates.push(g.neighbors(v).intersection(remaining).with(v));
    }
    let mut out: Vec<NodeSet> = candidates
        .iter()
        .copied()
        .filter(|&c| !candidates.iter().any(|&d| c.is_strict_subset(d)))
        .collect();
    out.sort();
    out.dedup();
    out
}
