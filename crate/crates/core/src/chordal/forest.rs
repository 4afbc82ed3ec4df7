use super::ChordalError;
use crate::nodeset::NodeSet;

/// Edge of a clique graph between cliques `a < b`, labelled by their
/// intersection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CliqueEdge {
    pub a: usize,
    pub b: usize,
    pub label: NodeSet,
}

impl CliqueEdge {
    pub fn weight(&self) -> usize {
        self.label.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueGraph {
    pub cliques: Vec<NodeSet>,
    pub edges: Vec<CliqueEdge>,
}

/// Edge subset of a clique graph; endpoints index the clique list.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SpanningForest {
    pub edges: Vec<CliqueEdge>,
}

impl SpanningForest {
    pub fn weight(&self) -> usize {
        self.edges.iter().map(CliqueEdge::weight).sum()
    }
}

/// Connects every intersecting pair of cliques. Fails if two cliques are
/// comparable.
pub fn clique_graph(cliques: &[NodeSet]) -> Result<CliqueGraph, ChordalError> {
    let mut edges = Vec::new();
    for (a, &ca) in cliques.iter().enumerate() {
        for (b, &cb) in cliques.iter().enumerate().skip(a + 1) {
            if ca.is_subset(cb) || cb.is_subset(ca) {
                return Err(ChordalError::NotAntichain(ca, cb));
            }
            let label = ca.intersection(cb);
            if !label.is_empty() {
                edges.push(CliqueEdge { a, b, label });
            }
        }
    }
    Ok(CliqueGraph {
        cliques: cliques.to_vec(),
        edges,
    })
}

pub(crate) struct DisjointSets {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSets {
    pub(crate) fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// False if already joined.
    pub(crate) fn union(&mut self, x: usize, y: usize) -> bool {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        match self.rank[rx].cmp(&self.rank[ry]) {
            std::cmp::Ordering::Less => self.parent[rx] = ry,
            std::cmp::Ordering::Greater => self.parent[ry] = rx,
            std::cmp::Ordering::Equal => {
                self.parent[ry] = rx;
                self.rank[rx] += 1;
            }
        }
        true
    }
}

/// Kruskal on negated weights. Ties are broken by endpoint indices.
pub fn max_weight_spanning_forest(cg: &CliqueGraph) -> SpanningForest {
    let mut order: Vec<&CliqueEdge> = cg.edges.iter().collect();
    order.sort_by_key(|e| (std::cmp::Reverse(e.weight()), e.a, e.b));
    let mut sets = DisjointSets::new(cg.cliques.len());
    let edges = order
        .into_iter()
        .filter(|e| sets.union(e.a, e.b))
        .copied()
        .collect();
    SpanningForest { edges }
}

pub fn separators_of(forest: &SpanningForest) -> Vec<NodeSet> {
    forest.edges.iter().map(|e| e.label).collect()
}

pub fn forest_is_acyclic(n_cliques: usize, forest: &SpanningForest) -> bool {
    let mut sets = DisjointSets::new(n_cliques);
    forest
        .edges
        .iter()
        .all(|e| e.a < n_cliques && e.b < n_cliques && sets.union(e.a, e.b))
}

/// Every node lies in exactly one more clique than forest labels.
pub fn is_balanced(cliques: &[NodeSet], forest: &SpanningForest) -> bool {
    let nodes = cliques
        .iter()
        .chain(forest.edges.iter().map(|e| &e.label))
        .fold(NodeSet::EMPTY, |acc, &s| acc.union(s));
    nodes.iter().all(|n| {
        let in_cliques = cliques.iter().filter(|c| c.contains(n)).count();
        let in_labels = forest.edges.iter().filter(|e| e.label.contains(n)).count();
        in_cliques == in_labels + 1
    })
}

/// Junction-forest property: for cliques joined by a forest path, every
/// clique on the path contains their intersection. Returns false for a
/// cyclic edge set or out-of-range endpoints.
pub fn check_running_intersection(forest: &SpanningForest, cliques: &[NodeSet]) -> bool {
    let m = cliques.len();
    if !forest_is_acyclic(m, forest) {
        return false;
    }
    let mut adj = vec![Vec::new(); m];
    for e in &forest.edges {
        adj[e.a].push(e.b);
        adj[e.b].push(e.a);
    }
    for src in 0..m {
        // Depth-first walk carrying the running intersection along the path.
        let mut stack = vec![(src, usize::MAX, cliques[src])];
        while let Some((v, from, common)) = stack.pop() {
            for &w in &adj[v] {
                if w == from {
                    continue;
                }
                // `common` is the intersection of all cliques on the path
                // src..=v; the pair (src, w) needs c_src ∩ c_w inside it.
                let need = cliques[src].intersection(cliques[w]);
                if !need.is_subset(common) {
                    return false;
                }
                stack.push((w, v, common.intersection(cliques[w])));
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(ix: &[usize]) -> NodeSet {
        NodeSet::from_indices(ix.iter().copied())
    }

    fn chain() -> Vec<NodeSet> {
        vec![set(&[0, 1, 2]), set(&[1, 2, 3]), set(&[2, 3, 4])]
    }

    fn edge(cliques: &[NodeSet], a: usize, b: usize) -> CliqueEdge {
        CliqueEdge {
            a,
            b,
            label: cliques[a].intersection(cliques[b]),
        }
    }

    #[test]
    fn star_clique_graph() {
        let cg = clique_graph(&[set(&[0, 1]), set(&[1, 2]), set(&[1, 3])]).unwrap();
        assert_eq!(cg.edges.len(), 3);
        assert!(cg.edges.iter().all(|e| e.label == set(&[1]) && e.weight() == 1));
        let f = max_weight_spanning_forest(&cg);
        assert_eq!(separators_of(&f), vec![set(&[1]), set(&[1])]);
    }

    #[test]
    fn disjoint_cliques_have_no_edges() {
        let cg = clique_graph(&[set(&[0, 1]), set(&[2, 3])]).unwrap();
        assert!(cg.edges.is_empty());
        assert!(max_weight_spanning_forest(&cg).edges.is_empty());
    }

    #[test]
    fn chain_labels_and_weights() {
        let cg = clique_graph(&chain()).unwrap();
        let labels: Vec<(NodeSet, usize)> =
            cg.edges.iter().map(|e| (e.label, e.weight())).collect();
        assert_eq!(labels, vec![(set(&[1, 2]), 2), (set(&[2]), 1), (set(&[2, 3]), 2)]);
        let f = max_weight_spanning_forest(&cg);
        assert_eq!(separators_of(&f), vec![set(&[1, 2]), set(&[2, 3])]);
        assert!(is_balanced(&chain(), &f));
        assert!(check_running_intersection(&f, &chain()));
    }

    #[test]
    fn comparable_cliques_rejected() {
        assert!(matches!(
            clique_graph(&[set(&[0, 1]), set(&[0, 1, 2])]),
            Err(ChordalError::NotAntichain(_, _))
        ));
    }

    #[test]
    fn skipping_heavy_edge_unbalances() {
        let c = chain();
        let f = SpanningForest {
            edges: vec![edge(&c, 0, 1), edge(&c, 0, 2)],
        };
        assert!(!is_balanced(&c, &f));
        // Path {1,2,3} - {0,1,2} - {2,3,4} drops node 3.
        assert!(!check_running_intersection(&f, &c));
    }

    #[test]
    fn single_clique_and_single_edge() {
        let one = vec![set(&[0, 1, 2])];
        assert!(is_balanced(&one, &SpanningForest::default()));
        assert!(max_weight_spanning_forest(&clique_graph(&one).unwrap()).edges.is_empty());
        let two = vec![set(&[0, 1]), set(&[1, 2])];
        let f = SpanningForest {
            edges: vec![edge(&two, 0, 1)],
        };
        assert!(check_running_intersection(&f, &two));
    }

    #[test]
    fn cycle_detection() {
        let c = vec![set(&[0, 1]), set(&[1, 2]), set(&[0, 2])];
        let f = SpanningForest {
            edges: vec![edge(&c, 0, 1), edge(&c, 1, 2), edge(&c, 0, 2)],
        };
        assert!(!forest_is_acyclic(3, &f));
        // Balanced yet cyclic: balancing alone does not imply acyclicity.
        assert!(is_balanced(&c, &f));
        assert!(!check_running_intersection(&f, &c));
    }
}
